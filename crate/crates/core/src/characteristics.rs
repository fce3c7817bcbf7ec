//! Circular-arc characteristics carrying constant divergence.
//!
//! Along a characteristic of an S¹-valued critical field u = (cos θ, sin θ)
//! the point moves with unit speed in the direction τ = (−sin θ, cos θ),
//! θ grows linearly at rate v and v = div u stays constant.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jump::WallCurve;
use crate::numerics::Pchip;

/// Below this |v0| arcs are evaluated as straight lines.
pub const STRAIGHT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicArc {
    pub x0: f64,
    pub y0: f64,
    pub theta0: f64,
    pub v0: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
}

fn sinc(w: f64) -> f64 {
    if w.abs() < 1e-4 {
        1.0 - w * w / 6.0
    } else {
        w.sin() / w
    }
}

fn dsinc(w: f64) -> f64 {
    if w.abs() < 1e-3 {
        let w2 = w * w;
        w * (-1.0 / 3.0 + w2 / 30.0 - w2 * w2 / 840.0)
    } else {
        (w * w.cos() - w.sin()) / (w * w)
    }
}

impl CharacteristicArc {
    pub fn new(x0: f64, y0: f64, theta0: f64, v0: f64, t_max: f64) -> Result<Self> {
        if ![x0, y0, theta0, v0, t_max].iter().all(|v| v.is_finite()) || t_max < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "arc fields must be finite with t_max >= 0: ({x0}, {y0}, {theta0}, {v0}, {t_max})"
            )));
        }
        Ok(CharacteristicArc {
            x0,
            y0,
            theta0,
            v0,
            t_max,
        })
    }

    /// Evaluate without the range check.
    pub fn eval(&self, t: f64) -> ArcPoint {
        let (x, y) = if self.v0.abs() < STRAIGHT_THRESHOLD {
            (
                self.x0 - t * self.theta0.sin(),
                self.y0 + t * self.theta0.cos(),
            )
        } else {
            // Half-angle form of x0 + (cos(θ0+vt) − cos θ0)/v, free of cancellation.
            let w = 0.5 * self.v0 * t;
            let phi = self.theta0 + w;
            let k = t * sinc(w);
            (self.x0 - k * phi.sin(), self.y0 + k * phi.cos())
        };
        ArcPoint {
            x,
            y,
            theta: self.theta0 + self.v0 * t,
            v: self.v0,
        }
    }

    /// ∂(x, y)/∂θ0 and ∂(x, y)/∂v0 at parameter t.
    pub fn partials(&self, t: f64) -> ([f64; 2], [f64; 2]) {
        let w = 0.5 * self.v0 * t;
        let phi = self.theta0 + w;
        let (sp, cp) = phi.sin_cos();
        let s = sinc(w);
        let ds = dsinc(w);
        let d_theta = [-t * cp * s, -t * sp * s];
        let h = 0.5 * t;
        let d_v = [-t * (cp * h * s + sp * ds * h), t * (-sp * h * s + cp * ds * h)];
        (d_theta, d_v)
    }

    fn check(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.t_max.max(1.0);
        if !(t >= -slack && t <= self.t_max + slack) {
            return Err(Error::OutOfRange {
                t,
                t_max: self.t_max,
            });
        }
        Ok(())
    }
}

pub fn arc_point(arc: &CharacteristicArc, t: f64) -> Result<ArcPoint> {
    arc.check(t)?;
    Ok(arc.eval(t))
}

/// Unit tangent τ = (−sin θ, cos θ) and normal ν = τ rotated by +π/2.
pub fn arc_tangent_normal(arc: &CharacteristicArc, t: f64) -> Result<([f64; 2], [f64; 2])> {
    arc.check(t)?;
    let th = arc.theta0 + arc.v0 * t;
    let tau = [-th.sin(), th.cos()];
    Ok((tau, [-tau[1], tau[0]]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedPoint {
    pub x0: f64,
    pub y0: f64,
    pub theta0: f64,
    pub v0: f64,
}

pub type SeedFn = Arc<dyn Fn(f64) -> Result<SeedPoint> + Send + Sync>;
pub type TimeFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A point of a family in physical terms: director angle and divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
}

/// One-parameter family of characteristics s ↦ arc(s), t ∈ [0, t*(s)].
///
/// A `reversed` family is traversed against τ: its raw arc angle is the
/// director angle plus π and its raw curvature is −div u.
#[derive(Clone)]
pub struct CharacteristicFamily {
    pub label: String,
    pub s_range: (f64, f64),
    pub reversed: bool,
    /// Number of symmetry images of this family in the full domain.
    pub multiplicity: f64,
    seed: SeedFn,
    t_star: TimeFn,
}

impl std::fmt::Debug for CharacteristicFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacteristicFamily")
            .field("label", &self.label)
            .field("s_range", &self.s_range)
            .field("reversed", &self.reversed)
            .field("multiplicity", &self.multiplicity)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianValue {
    pub det: f64,
    /// True when the s-derivative had to use one-sided differences.
    pub one_sided: bool,
}

impl CharacteristicFamily {
    pub fn new(label: impl Into<String>, s_range: (f64, f64), seed: SeedFn, t_star: TimeFn) -> Self {
        CharacteristicFamily {
            label: label.into(),
            s_range,
            reversed: false,
            multiplicity: 1.0,
            seed,
            t_star,
        }
    }

    pub fn with_reversed(mut self, reversed: bool) -> Self {
        self.reversed = reversed;
        self
    }

    pub fn with_multiplicity(mut self, m: f64) -> Self {
        self.multiplicity = m;
        self
    }

    /// Family from seed samples, interpolated monotonically in s.
    pub fn from_samples(
        label: impl Into<String>,
        s: Vec<f64>,
        seeds: Vec<SeedPoint>,
        t_star: Vec<f64>,
    ) -> Result<Self> {
        if seeds.len() != s.len() || t_star.len() != s.len() {
            return Err(Error::InvalidParameter(
                "seed samples must match the s samples".into(),
            ));
        }
        let comp = |f: fn(&SeedPoint) -> f64| Pchip::new(s.clone(), seeds.iter().map(f).collect());
        let px = comp(|p| p.x0)?;
        let py = comp(|p| p.y0)?;
        let pt = comp(|p| p.theta0)?;
        let pv = comp(|p| p.v0)?;
        let ts = Pchip::new(s.clone(), t_star)?;
        let range = (s[0], s[s.len() - 1]);
        Ok(Self::new(
            label,
            range,
            Arc::new(move |s| {
                Ok(SeedPoint {
                    x0: px.eval(s),
                    y0: py.eval(s),
                    theta0: pt.eval(s),
                    v0: pv.eval(s),
                })
            }),
            Arc::new(move |s| Ok(ts.eval(s))),
        ))
    }

    pub fn seed(&self, s: f64) -> Result<SeedPoint> {
        (self.seed)(s)
    }

    pub fn t_star(&self, s: f64) -> Result<f64> {
        (self.t_star)(s)
    }

    pub fn arc(&self, s: f64) -> Result<CharacteristicArc> {
        let p = self.seed(s)?;
        let t = self.t_star(s)?;
        CharacteristicArc::new(p.x0, p.y0, p.theta0, p.v0, t.max(0.0))
    }

    fn to_physical(&self, p: ArcPoint) -> FamilyPoint {
        if self.reversed {
            FamilyPoint {
                x: p.x,
                y: p.y,
                theta: p.theta + std::f64::consts::PI,
                v: -p.v,
            }
        } else {
            FamilyPoint {
                x: p.x,
                y: p.y,
                theta: p.theta,
                v: p.v,
            }
        }
    }

    /// Physical state at (s, t); t is not range-checked.
    pub fn point(&self, s: f64, t: f64) -> Result<FamilyPoint> {
        let p = self.seed(s)?;
        let arc = CharacteristicArc {
            x0: p.x0,
            y0: p.y0,
            theta0: p.theta0,
            v0: p.v0,
            t_max: f64::INFINITY,
        };
        Ok(self.to_physical(arc.eval(t)))
    }

    /// Terminal state of arc s.
    pub fn terminal(&self, s: f64) -> Result<FamilyPoint> {
        let t = self.t_star(s)?;
        self.point(s, t)
    }

    fn span(&self) -> f64 {
        (self.s_range.1 - self.s_range.0).abs().max(1e-12)
    }

    /// Seed and its s-derivative: fourth-order central differences, or
    /// third-order one-sided ones near the range ends.
    pub fn seed_derivative(&self, s: f64) -> Result<(SeedPoint, SeedPoint, bool)> {
        let h = 2e-4 * self.span();
        let (lo, hi) = self.s_range;
        let p0 = self.seed(s)?;
        let comb = |ps: &[SeedPoint], cs: &[f64], scale: f64| SeedPoint {
            x0: ps.iter().zip(cs).map(|(p, c)| c * p.x0).sum::<f64>() / scale,
            y0: ps.iter().zip(cs).map(|(p, c)| c * p.y0).sum::<f64>() / scale,
            theta0: ps.iter().zip(cs).map(|(p, c)| c * p.theta0).sum::<f64>() / scale,
            v0: ps.iter().zip(cs).map(|(p, c)| c * p.v0).sum::<f64>() / scale,
        };
        if s - 2.0 * h >= lo && s + 2.0 * h <= hi {
            let ps = [
                self.seed(s - 2.0 * h)?,
                self.seed(s - h)?,
                self.seed(s + h)?,
                self.seed(s + 2.0 * h)?,
            ];
            Ok((p0, comb(&ps, &[1.0, -8.0, 8.0, -1.0], 12.0 * h), false))
        } else {
            let h = 0.5 * h;
            let dir = if s - lo < hi - s { 1.0 } else { -1.0 };
            let ps = [
                p0,
                self.seed(s + dir * h)?,
                self.seed(s + 2.0 * dir * h)?,
                self.seed(s + 3.0 * dir * h)?,
            ];
            Ok((p0, comb(&ps, &[-11.0, 18.0, -9.0, 2.0], 6.0 * h * dir), true))
        }
    }

    /// ∂(x,y)/∂s and ∂(x,y)/∂t at (s, t).
    pub fn position_derivatives(&self, s: f64, t: f64) -> Result<([f64; 2], [f64; 2], bool)> {
        let (p, dp, one_sided) = self.seed_derivative(s)?;
        Ok(Self::derivs_from(&p, &dp, t, one_sided))
    }

    fn derivs_from(p: &SeedPoint, dp: &SeedPoint, t: f64, one_sided: bool) -> ([f64; 2], [f64; 2], bool) {
        let arc = CharacteristicArc {
            x0: p.x0,
            y0: p.y0,
            theta0: p.theta0,
            v0: p.v0,
            t_max: f64::INFINITY,
        };
        let (d_th, d_v) = arc.partials(t);
        let ds = [
            dp.x0 + d_th[0] * dp.theta0 + d_v[0] * dp.v0,
            dp.y0 + d_th[1] * dp.theta0 + d_v[1] * dp.v0,
        ];
        let th = p.theta0 + p.v0 * t;
        (ds, [-th.sin(), th.cos()], one_sided)
    }

    /// Integrate `f(point, |J|)` over the family in (s, t) coordinates with
    /// a composite Gauss rule. Returns the integral.
    pub fn integrate<F>(&self, s_panels: usize, t_panels: usize, order: usize, f: F) -> Result<f64>
    where
        F: Fn(&FamilyPoint, f64) -> f64 + Sync,
    {
        let rule = crate::numerics::gauss_legendre(order);
        let (lo, hi) = self.s_range;
        let s_nodes = rule.composite(lo, hi, s_panels);
        let per_s: Vec<Result<f64>> = s_nodes
            .par_iter()
            .map(|&(s, ws)| {
                let (p, dp, one_sided) = self.seed_derivative(s)?;
                let ts = self.t_star(s)?;
                if ts <= 0.0 {
                    return Ok(0.0);
                }
                let arc = CharacteristicArc {
                    x0: p.x0,
                    y0: p.y0,
                    theta0: p.theta0,
                    v0: p.v0,
                    t_max: ts,
                };
                let terms: Vec<f64> = rule
                    .composite(0.0, ts, t_panels)
                    .into_iter()
                    .map(|(t, wt)| {
                        let (a, b, _) = Self::derivs_from(&p, &dp, t, one_sided);
                        let j = (a[0] * b[1] - a[1] * b[0]).abs();
                        wt * f(&self.to_physical(arc.eval(t)), j)
                    })
                    .collect();
                Ok(ws * crate::numerics::pairwise_sum(&terms))
            })
            .collect();
        let vals: Result<Vec<f64>> = per_s.into_iter().collect();
        Ok(crate::numerics::pairwise_sum(&vals?))
    }

    /// Area covered by the family.
    pub fn area(&self, s_panels: usize, t_panels: usize, order: usize) -> Result<f64> {
        self.integrate(s_panels, t_panels, order, |_, j| j)
    }

    /// Dump `s,t,x,y,theta,v` on an `ns × nt` lattice (endpoints included).
    pub fn write_csv<W: Write>(&self, ns: usize, nt: usize, mut w: W) -> Result<()> {
        writeln!(w, "s,t,x,y,theta,v")?;
        let (lo, hi) = self.s_range;
        for i in 0..ns {
            let s = lo + (hi - lo) * i as f64 / (ns - 1).max(1) as f64;
            let ts = self.t_star(s)?;
            for j in 0..nt {
                let t = ts * j as f64 / (nt - 1).max(1) as f64;
                let p = self.point(s, t)?;
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    s, t, p.x, p.y, p.theta, p.v
                )?;
            }
        }
        Ok(())
    }
}

/// det ∂(x, y)/∂(s, t).
pub fn family_jacobian(family: &CharacteristicFamily, s: f64, t: f64) -> Result<JacobianValue> {
    let (a, b, one_sided) = family.position_derivatives(s, t)?;
    Ok(JacobianValue {
        det: a[0] * b[1] - a[1] * b[0],
        one_sided,
    })
}

/// Newton inversion of the family map: find (s, t) with point(s, t) = (x, y).
pub fn invert_family(
    family: &CharacteristicFamily,
    x: f64,
    y: f64,
    guess: Option<(f64, f64)>,
) -> Result<(f64, f64)> {
    if let Some(g) = guess {
        return newton_invert(family, x, y, g);
    }
    let start = scan_start(family, x, y, 24, 0.02)?;
    newton_invert(family, x, y, start).or_else(|e| {
        // Points near the ends of the seed range need a finer start.
        let start = scan_start(family, x, y, 200, 0.0)?;
        newton_invert(family, x, y, start).map_err(|_| e)
    })
}

fn scan_start(family: &CharacteristicFamily, x: f64, y: f64, n: usize, margin: f64) -> Result<(f64, f64)> {
    let (lo, hi) = family.s_range;
    let span = hi - lo;
    let mut best = (f64::INFINITY, lo, 0.0);
    for i in 0..=n {
        let s = (lo + span * (margin + (1.0 - 2.0 * margin) * i as f64 / n as f64)).min(hi);
        let Ok(ts) = family.t_star(s) else { continue };
        for j in 0..=n {
            let t = ts * j as f64 / n as f64;
            if let Ok(p) = family.point(s, t) {
                let d = (p.x - x).hypot(p.y - y);
                if d < best.0 {
                    best = (d, s, t);
                }
            }
        }
    }
    if best.0.is_finite() {
        Ok((best.1, best.2))
    } else {
        Err(Error::NoConvergence { x, y })
    }
}

fn newton_invert(family: &CharacteristicFamily, x: f64, y: f64, start: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = family.s_range;
    let fail = || Error::NoConvergence { x, y };
    let resid = |s: f64, t: f64| -> Result<[f64; 2]> {
        let p = family.point(s, t)?;
        Ok([p.x - x, p.y - y])
    };
    let (mut s, mut t) = start;
    let mut r = resid(s, t)?;
    let mut nr = r[0].hypot(r[1]);
    for _ in 0..50 {
        if nr < 1e-12 {
            break;
        }
        let (a, b, _) = family.position_derivatives(s, t)?;
        let det = a[0] * b[1] - a[1] * b[0];
        if det == 0.0 || !det.is_finite() {
            return Err(fail());
        }
        let ds = (r[0] * b[1] - r[1] * b[0]) / det;
        let dt = (a[0] * r[1] - a[1] * r[0]) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let sn = (s - lambda * ds).clamp(lo, hi);
            let tn = t - lambda * dt;
            if let Ok(rn) = resid(sn, tn) {
                let nn = rn[0].hypot(rn[1]);
                if nn < nr {
                    s = sn;
                    t = tn;
                    r = rn;
                    nr = nn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if !(nr < 1e-10) {
        return Err(fail());
    }
    let ts = family.t_star(s)?;
    let slack = 1e-9 * ts.max(1.0);
    if t < -slack || t > ts + slack || s < lo || s > hi {
        return Err(fail());
    }
    Ok((s, t.clamp(0.0, ts)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoliationReport {
    pub min_jacobian: f64,
    pub max_jacobian: f64,
    pub sign_consistent: bool,
    pub crossings: usize,
}

fn segments_cross(p: [f64; 2], q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> Option<(f64, f64)> {
    let d1 = [q[0] - p[0], q[1] - p[1]];
    let d2 = [b[0] - a[0], b[1] - a[1]];
    let den = d1[0] * d2[1] - d1[1] * d2[0];
    if den == 0.0 {
        return None;
    }
    let w = [a[0] - p[0], a[1] - p[1]];
    let u = (w[0] * d2[1] - w[1] * d2[0]) / den;
    let v = (w[0] * d1[1] - w[1] * d1[0]) / den;
    let d = 1e-6;
    (u > d && u < 1.0 - d && v > d && v < 1.0 - d).then_some((u, v))
}

/// Newton on A(t) = B(r) from a polyline crossing; true if the exact arcs
/// meet at interior parameters.
fn arcs_cross(a: &CharacteristicArc, b: &CharacteristicArc, mut t: f64, mut r: f64) -> bool {
    let scale = a.t_max.max(b.t_max).max(1e-300);
    for _ in 0..40 {
        let (p, q) = (a.eval(t), b.eval(r));
        let f = [p.x - q.x, p.y - q.y];
        if f[0].hypot(f[1]) < 1e-13 * scale {
            let (ma, mb) = (1e-6 * a.t_max, 1e-6 * b.t_max);
            return t > ma && t < a.t_max - ma && r > mb && r < b.t_max - mb;
        }
        let ta = [-p.theta.sin(), p.theta.cos()];
        let tb = [-q.theta.sin(), q.theta.cos()];
        // Columns ta and −tb.
        let det = -ta[0] * tb[1] + ta[1] * tb[0];
        if det.abs() < 1e-14 {
            return false;
        }
        let dt = (-f[0] * tb[1] + f[1] * tb[0]) / det;
        let dr = (ta[0] * f[1] - ta[1] * f[0]) / det;
        t -= dt;
        r -= dr;
        if !(t.is_finite() && r.is_finite()) || t < -scale || r < -scale || t > 2.0 * scale || r > 2.0 * scale {
            return false;
        }
    }
    false
}

/// Sample the Jacobian on an `ns × nt` lattice of cell midpoints and count
/// pairwise crossings of the sampled arcs, each confirmed on the exact arcs.
pub fn check_foliation(family: &CharacteristicFamily, ns: usize, nt: usize) -> Result<FoliationReport> {
    let ns = ns.max(8);
    let nt = nt.max(8);
    let (lo, hi) = family.s_range;
    let ss: Vec<f64> = (0..ns)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / ns as f64)
        .collect();
    let rows: Vec<Result<(Vec<f64>, Vec<[f64; 2]>, CharacteristicArc)>> = ss
        .par_iter()
        .map(|&s| {
            let ts = family.t_star(s)?;
            let mut jac = Vec::with_capacity(nt);
            for j in 0..nt {
                let t = ts * (j as f64 + 0.5) / nt as f64;
                jac.push(family_jacobian(family, s, t)?.det);
            }
            let mut pts = Vec::with_capacity(nt + 1);
            for j in 0..=nt {
                let p = family.point(s, ts * j as f64 / nt as f64)?;
                pts.push([p.x, p.y]);
            }
            Ok((jac, pts, family.arc(s)?))
        })
        .collect();
    let rows: Vec<(Vec<f64>, Vec<[f64; 2]>, CharacteristicArc)> = rows.into_iter().collect::<Result<_>>()?;
    let all: Vec<f64> = rows.iter().flat_map(|r| r.0.iter().copied()).collect();
    let min_jacobian = all.iter().copied().fold(f64::INFINITY, f64::min);
    let max_jacobian = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sign_consistent = min_jacobian > 0.0 || max_jacobian < 0.0;
    let bbox = |pts: &[[f64; 2]]| {
        pts.iter().fold(
            [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
            |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
        )
    };
    let boxes: Vec<[f64; 4]> = rows.iter().map(|r| bbox(&r.1)).collect();
    let crossings: usize = (0..ns)
        .into_par_iter()
        .map(|i| {
            let mut c = 0;
            for k in i + 1..ns {
                let (bi, bk) = (boxes[i], boxes[k]);
                if bi[0] > bk[2] || bk[0] > bi[2] || bi[1] > bk[3] || bk[1] > bi[3] {
                    continue;
                }
                let (pi, pk) = (&rows[i].1, &rows[k].1);
                let (ai, ak) = (&rows[i].2, &rows[k].2);
                let (hi_, hk) = (ai.t_max / (pi.len() - 1) as f64, ak.t_max / (pk.len() - 1) as f64);
                for (ja, a) in pi.windows(2).enumerate() {
                    for (jb, b) in pk.windows(2).enumerate() {
                        if let Some((u, v)) = segments_cross(a[0], a[1], b[0], b[1]) {
                            if arcs_cross(ai, ak, (ja as f64 + u) * hi_, (jb as f64 + v) * hk) {
                                c += 1;
                            }
                        }
                    }
                }
            }
            c
        })
        .sum();
    Ok(FoliationReport {
        min_jacobian,
        max_jacobian,
        sign_consistent,
        crossings,
    })
}

/// A critical point of the limit energy assembled from characteristic
/// families and walls.
#[derive(Debug, Clone)]
pub struct PiecewiseCriticalField {
    pub domain: String,
    pub families: Vec<CharacteristicFamily>,
    pub walls: Vec<WallCurve>,
}
