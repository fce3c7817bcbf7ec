//! Jump sets: sampled polylines with one-sided traces, and parametric
//! wall curves used by the energy quadrature.

use std::sync::Arc;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;
const NORMAL_TOL: f64 = 1e-10;

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// A sampled jump curve. `normals[k]` is the unit normal at vertex `k`
/// pointing from the + side to the − side.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSegment {
    pub polyline: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub trace_plus: Vec<[f64; 2]>,
    pub trace_minus: Vec<[f64; 2]>,
}

impl JumpSegment {
    pub fn new(
        polyline: Vec<[f64; 2]>,
        normals: Vec<[f64; 2]>,
        trace_plus: Vec<[f64; 2]>,
        trace_minus: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let n = polyline.len();
        if n < 2 || normals.len() != n || trace_plus.len() != n || trace_minus.len() != n {
            return Err(Error::InvalidTrace {
                vertex: 0,
                reason: "polyline, normals and traces must have equal length >= 2".into(),
            });
        }
        let seg = JumpSegment {
            polyline,
            normals,
            trace_plus,
            trace_minus,
        };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..self.polyline.len() {
            let (p, m, nu) = (self.trace_plus[k], self.trace_minus[k], self.normals[k]);
            for (name, v) in [("u+", p), ("u-", m), ("normal", nu)] {
                if (norm(v) - 1.0).abs() > UNIT_TOL {
                    return Err(Error::InvalidTrace {
                        vertex: k,
                        reason: format!("|{name}| = {}", norm(v)),
                    });
                }
            }
            let jump = dot([p[0] - m[0], p[1] - m[1]], nu);
            if jump.abs() > NORMAL_TOL {
                return Err(Error::InvalidTrace {
                    vertex: k,
                    reason: format!("normal component jumps by {jump:e}"),
                });
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.polyline
            .windows(2)
            .map(|w| norm([w[1][0] - w[0][0], w[1][1] - w[0][1]]))
            .sum()
    }
}

/// One point of a wall curve with both traces.
///
/// For a boundary wall `plus` is the interior trace and `minus` the
/// boundary datum `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSample {
    pub point: [f64; 2],
    /// |dγ/dσ|.
    pub speed: f64,
    pub normal: [f64; 2],
    pub plus: [f64; 2],
    pub minus: [f64; 2],
    pub div_plus: f64,
    pub div_minus: f64,
}

pub type WallFn = Arc<dyn Fn(f64) -> Result<WallSample> + Send + Sync>;

/// A parametrized wall γ(σ), σ in `range`, contributing `multiplicity`
/// copies to the energy (symmetry images).
#[derive(Clone)]
pub struct WallCurve {
    pub label: String,
    pub range: (f64, f64),
    pub multiplicity: f64,
    pub boundary: bool,
    /// Signed curvature of the curve (constant curves only; `None` if unknown).
    pub curvature: Option<f64>,
    pub eval: WallFn,
}

impl std::fmt::Debug for WallCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WallCurve")
            .field("label", &self.label)
            .field("range", &self.range)
            .field("multiplicity", &self.multiplicity)
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl WallCurve {
    /// Sample `n + 1` vertices uniformly in σ (endpoints nudged inward by
    /// `inset` of the range where traces may be undefined).
    pub fn sample(&self, n: usize, inset: f64) -> Result<JumpSegment> {
        let (a, b) = self.range;
        let (a, b) = (a + inset * (b - a), b - inset * (b - a));
        let mut poly = Vec::with_capacity(n + 1);
        let mut normals = Vec::with_capacity(n + 1);
        let mut tp = Vec::with_capacity(n + 1);
        let mut tm = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = a + (b - a) * k as f64 / n as f64;
            let w = (self.eval)(s)?;
            poly.push(w.point);
            normals.push(w.normal);
            tp.push(w.plus);
            tm.push(w.minus);
        }
        JumpSegment::new(poly, normals, tp, tm)
    }
}
