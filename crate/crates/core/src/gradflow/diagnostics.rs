use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use serde::Serialize;

use crate::energy::nodal_divergence;
use crate::error::Result;
use crate::field::Field2D;
use crate::numerics::contour::{marching_squares, Polyline};

/// Nodal divergence and director angle θ = atan2(u₂, u₁).
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub divergence: Vec<f64>,
    pub angle: Vec<f64>,
}

pub fn diagnostics(field: &Field2D) -> Diagnostics {
    Diagnostics {
        divergence: nodal_divergence(&field.grid, &field.values),
        angle: field.values.iter().map(|u| u[1].atan2(u[0])).collect(),
    }
}

/// Level sets of a nodal scalar on the field's grid.
pub fn contours(field: &Field2D, values: &[f64], levels: &[f64]) -> Vec<(f64, Vec<Polyline>)> {
    let grid = &field.grid;
    let (ni, nj) = grid.node_counts();
    levels
        .iter()
        .map(|&level| {
            let lines = if grid.is_polar() {
                // θ is the periodic axis, so put it first.
                let mut t = vec![0.0; ni * nj];
                for j in 0..nj {
                    for i in 0..ni {
                        t[i * nj + j] = values[j * ni + i];
                    }
                }
                marching_squares(&t, nj, ni, true, |a, b| grid.point_at(b, a), level)
            } else {
                marching_squares(values, ni, nj, grid.periodic_x, |a, b| grid.point_at(a, b), level)
            };
            (level, lines)
        })
        .collect()
}

/// CSV `level,line,x,y`.
pub fn write_contours_csv<W: Write>(sets: &[(f64, Vec<Polyline>)], mut w: W) -> Result<()> {
    writeln!(w, "level,line,x,y")?;
    for (level, lines) in sets {
        for (k, line) in lines.iter().enumerate() {
            for p in line {
                writeln!(w, "{:.16e},{},{:.16e},{:.16e}", level, k, p[0], p[1])?;
            }
        }
    }
    Ok(())
}

/// Where a ring of a polar field crosses a diagonal wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpSample {
    pub r: f64,
    pub diagonal: usize,
    /// Angle of the sign change of u·d, or NaN if there is none.
    pub phi: f64,
    /// Distance r·|sin(φ − φ_k)| from the diagonal line.
    pub distance: f64,
    /// Local cell size max(dr, r·dθ).
    pub cell: f64,
}

impl JumpSample {
    /// Distance from the diagonal in local cells (infinite if no jump was found).
    pub fn offset_cells(&self) -> f64 {
        if self.phi.is_nan() {
            f64::INFINITY
        } else {
            self.distance / self.cell
        }
    }
}

/// For every ring with r in `[r_lo, r_hi]` and every diagonal
/// φ_k = π/4 + kπ/2, locate the sign change of u·(cos φ_k, sin φ_k)
/// nearest to φ_k within ±π/8.
pub fn diagonal_jump_offsets(field: &Field2D, r_lo: f64, r_hi: f64) -> Vec<JumpSample> {
    let grid = &field.grid;
    assert!(grid.is_polar(), "diagonal jumps are defined on polar grids");
    let (ni, nj) = grid.node_counts();
    let (dr, dth) = grid.spacing();
    let half = (FRAC_PI_4 / 2.0 / dth).ceil() as isize;
    let mut out = Vec::new();
    for i in 0..ni {
        let (r, _) = grid.native(i, 0);
        if r < r_lo || r > r_hi {
            continue;
        }
        for k in 0..4 {
            let phik = FRAC_PI_4 + k as f64 * 2.0 * FRAC_PI_4;
            let d = [phik.cos(), phik.sin()];
            let centre = (phik / dth).round() as isize;
            let w = |jj: isize| {
                let j = jj.rem_euclid(nj as isize) as usize;
                let u = field.get(i, j);
                u[0] * d[0] + u[1] * d[1]
            };
            let mut best: Option<f64> = None;
            for jj in centre - half..centre + half {
                let (a, b) = (w(jj), w(jj + 1));
                if a == 0.0 || a * b < 0.0 {
                    let s = if a == b { 0.0 } else { a / (a - b) };
                    let phi = (jj as f64 + s) * dth;
                    if best.map_or(true, |p| (phi - phik).abs() < (p - phik).abs()) {
                        best = Some(phi);
                    }
                }
            }
            let phi = best.unwrap_or(f64::NAN);
            out.push(JumpSample {
                r,
                diagonal: k,
                phi,
                distance: r * (phi - phik).sin().abs(),
                cell: dr.max(r * dth),
            });
        }
    }
    out
}
