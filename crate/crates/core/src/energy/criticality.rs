use serde::Serialize;

use crate::characteristics::{invert_family, PiecewiseCriticalField};
use crate::error::Result;
use crate::params::Params;

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// L[div u] − 4√(1−(u·ν)²)(u·ν), with [·] = (+) − (−) and ν pointing from
/// the + side to the − side.
pub fn el4_residual(l: f64, plus: [f64; 2], div_plus: f64, div_minus: f64, normal: [f64; 2]) -> f64 {
    let un = dot(plus, normal);
    l * (div_plus - div_minus) - 4.0 * (1.0 - un * un).max(0.0).sqrt() * un
}

/// Stationarity of the wall itself:
/// (div₊)² − (div₋)² + (div₊ + div₋)′(u₊·τ − u₋·τ) − (8κ/3L)√(1−(u·ν)²)(1 + 2(u·ν)²).
///
/// κ is the curvature measured against ν: a circle whose centre lies on
/// the side ν points to has κ = −1/radius.
#[allow(clippy::too_many_arguments)]
pub fn el13_residual(
    l: f64,
    div_plus: f64,
    div_minus: f64,
    dsum_ds: f64,
    plus: [f64; 2],
    minus: [f64; 2],
    tangent: [f64; 2],
    normal: [f64; 2],
    kappa: f64,
) -> f64 {
    let un = dot(plus, normal);
    div_plus * div_plus - div_minus * div_minus + dsum_ds * (dot(plus, tangent) - dot(minus, tangent))
        - 8.0 * kappa / (3.0 * l) * (1.0 - un * un).max(0.0).sqrt() * (1.0 + 2.0 * un * un)
}

/// Sup-norm residuals of the criticality conditions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CriticalityReport {
    /// u⊥·∇div u in family interiors (central differences along u⊥).
    pub el5: f64,
    /// Natural boundary condition on interior walls.
    pub el4: f64,
    /// Natural boundary condition on boundary walls.
    pub el45: f64,
    /// Wall stationarity (walls with known curvature only).
    pub el13: f64,
    pub el5_samples: usize,
    pub wall_samples: usize,
}

pub fn criticality_residuals(field: &PiecewiseCriticalField, params: &Params) -> Result<CriticalityReport> {
    let l = params.l;
    let mut rep = CriticalityReport::default();
    let n = 8;
    for fam in &field.families {
        let (lo, hi) = fam.s_range;
        for i in 0..n {
            let s = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            let ts = fam.t_star(s)?;
            for j in 0..n {
                let t = ts * (j as f64 + 0.5) / n as f64;
                let p = fam.point(s, t)?;
                let h = 1e-5 * ts.max(1e-3);
                let tau = [-p.theta.sin(), p.theta.cos()];
                let fwd = invert_family(fam, p.x + h * tau[0], p.y + h * tau[1], Some((s, t + h)));
                let bwd = invert_family(fam, p.x - h * tau[0], p.y - h * tau[1], Some((s, t - h)));
                if let (Ok(a), Ok(b)) = (fwd, bwd) {
                    let va = fam.point(a.0, a.1)?.v;
                    let vb = fam.point(b.0, b.1)?.v;
                    rep.el5 = rep.el5.max(((va - vb) / (2.0 * h)).abs());
                    rep.el5_samples += 1;
                }
            }
        }
    }
    let m = 256;
    for w in &field.walls {
        let (a, b) = w.range;
        let inset = 1e-6 * (b - a);
        let hs = 1e-5 * (b - a);
        for k in 0..=m {
            let sg = a + inset + (b - a - 2.0 * inset) * k as f64 / m as f64;
            let p = (w.eval)(sg)?;
            if w.boundary {
                let gn = dot(p.minus, p.normal);
                let r = l * p.div_plus - 4.0 * (1.0 - gn * gn).max(0.0).sqrt() * gn;
                rep.el45 = rep.el45.max(r.abs());
            } else {
                let r = el4_residual(l, p.plus, p.div_plus, p.div_minus, p.normal);
                rep.el4 = rep.el4.max(r.abs());
                if let Some(kappa) = w.curvature {
                    let s0 = (sg - hs).max(a + 0.5 * inset);
                    let s1 = (sg + hs).min(b - 0.5 * inset);
                    let (q0, q1) = ((w.eval)(s0)?, (w.eval)(s1)?);
                    let dx = [q1.point[0] - q0.point[0], q1.point[1] - q0.point[1]];
                    let len = dx[0].hypot(dx[1]);
                    let tangent = [dx[0] / len, dx[1] / len];
                    let dsum = ((q1.div_plus + q1.div_minus) - (q0.div_plus + q0.div_minus)) / len;
                    let r = el13_residual(
                        l,
                        p.div_plus,
                        p.div_minus,
                        dsum,
                        p.plus,
                        p.minus,
                        tangent,
                        p.normal,
                        kappa,
                    );
                    rep.el13 = rep.el13.max(r.abs());
                }
            }
            rep.wall_samples += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_symmetric_wall_is_stationary() {
        let r = 0.5f64.sqrt();
        let nu = [-r, r];
        let up = [(0.2f64).cos(), -(0.2f64).sin()];
        let d = dot(up, nu);
        let um = [2.0 * d * nu[0] - up[0], 2.0 * d * nu[1] - up[1]];
        let res = el13_residual(1.0, -0.7, 0.7, 0.0, up, um, [r, r], nu, 0.0);
        assert_eq!(res, 0.0);
    }
}
