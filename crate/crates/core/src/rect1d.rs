//! One-dimensional minimizers on the strip [−H, H] with data
//! u(±H) = (±√(1−a²), a), and their tanh recovery profiles.

use serde::Serialize;

use crate::energy::{eval_E_eps_1d, GridProfile1D};
use crate::error::{Error, Result};
use crate::numerics::{bisect, golden_section_min};
use crate::params::Params;

/// Piecewise-linear u₂ through `breakpoints` with u₁ = sign·√(1−u₂²) on
/// each piece (`signs[k]` on [y_k, y_{k+1}]).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneDProfile {
    pub breakpoints: Vec<f64>,
    pub u2: Vec<f64>,
    pub signs: Vec<f64>,
    pub m: f64,
    pub a: f64,
    pub h: f64,
}

impl OneDProfile {
    /// Jump locations (where the sign of u₁ flips).
    pub fn jumps(&self) -> Vec<f64> {
        (1..self.breakpoints.len() - 1)
            .filter(|&k| self.signs[k - 1] != self.signs[k])
            .map(|k| self.breakpoints[k])
            .collect()
    }

    pub fn u2_at(&self, y: f64) -> f64 {
        let b = &self.breakpoints;
        let k = b.partition_point(|&v| v <= y).clamp(1, b.len() - 1) - 1;
        let s = (y - b[k]) / (b[k + 1] - b[k]);
        self.u2[k] * (1.0 - s) + self.u2[k + 1] * s
    }

    pub fn u_at(&self, y: f64) -> [f64; 2] {
        let b = &self.breakpoints;
        let k = b.partition_point(|&v| v <= y).clamp(1, b.len() - 1) - 1;
        let u2 = self.u2_at(y);
        [self.signs[k] * (1.0 - u2 * u2).max(0.0).sqrt(), u2]
    }
}

/// f(m) = (L/H)(m−a)² + (4/3)(1−m²)^{3/2}.
pub fn wall_height_energy(l_over_h: f64, a: f64, m: f64) -> f64 {
    let c = (1.0 - m * m).max(0.0);
    l_over_h * (m - a) * (m - a) + 4.0 / 3.0 * c * c.sqrt()
}

fn wall_height_slope(l_over_h: f64, a: f64, m: f64) -> f64 {
    2.0 * l_over_h * (m - a) - 4.0 * m * (1.0 - m * m).max(0.0).sqrt()
}

fn check(l: f64, h: f64, a: f64) -> Result<()> {
    let p = Params {
        l,
        h,
        a,
        ..Default::default()
    };
    p.validate()
}

/// Optimal wall height M.
#[allow(non_snake_case)]
pub fn solve_M(l: f64, h: f64, a: f64) -> Result<f64> {
    check(l, h, a)?;
    let k = l / h;
    if a == 0.0 {
        return Ok(if k < 2.0 { (1.0 - 0.25 * k * k).sqrt() } else { 0.0 });
    }
    let m = golden_section_min(|m| wall_height_energy(k, a, m), a, 1.0, 1e-14);
    // Polish on the stationarity condition when the slope brackets a root.
    let lo = (m - 1e-6).max(a);
    let hi = (m + 1e-6).min(1.0);
    let (flo, fhi) = (wall_height_slope(k, a, lo), wall_height_slope(k, a, hi));
    if flo < 0.0 && fhi > 0.0 {
        return bisect(|m| wall_height_slope(k, a, m), lo, hi, 1e-16);
    }
    Ok(m)
}

/// The minimal 1D limit energy for (L/H, a).
pub fn min_energy_1d(l_over_h: f64, a: f64) -> Result<f64> {
    let m = solve_M(l_over_h, 1.0, a)?;
    Ok(wall_height_energy(l_over_h, a, m))
}

/// The minimizer: u₂ linear from a at ±H to M at 0, u₁ flipping sign at 0.
/// For a = 0 and L/H > 2 this is the step representative with wall at 0.
pub fn minimizer_profile(l: f64, h: f64, a: f64) -> Result<OneDProfile> {
    let m = solve_M(l, h, a)?;
    Ok(OneDProfile {
        breakpoints: vec![-h, 0.0, h],
        u2: vec![a, m, a],
        signs: vec![-1.0, 1.0],
        m,
        a,
        h,
    })
}

/// Count sign changes of f′ on (a, 1) on a fine scan.
pub fn slope_sign_changes(l_over_h: f64, a: f64, samples: usize) -> usize {
    let mut prev = wall_height_slope(l_over_h, a, a + 1e-9);
    let mut n = 0;
    for k in 1..samples {
        let m = a + (1.0 - a) * k as f64 / samples as f64;
        let s = wall_height_slope(l_over_h, a, m);
        if s.signum() != prev.signum() && s != 0.0 {
            n += 1;
        }
        prev = s;
    }
    n
}

/// Recovery profile: u₂ from the minimizer, u₁ replaced by the tanh
/// heteroclinic on |y| ≤ ε^{5/6} and by linear interpolation on
/// ε^{5/6} ≤ |y| ≤ 2ε^{5/6}. Sampled at `n + 1` uniform nodes.
pub fn recovery_profile_1d(eps: f64, l: f64, h: f64, a: f64, n: usize) -> Result<GridProfile1D> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps > 0 (got {eps})")));
    }
    let needed = (20.0 * h / eps).ceil() as usize;
    if n < needed {
        return Err(Error::UnderResolved { n, needed });
    }
    let prof = minimizer_profile(l, h, a)?;
    let c = (1.0 - prof.m * prof.m).max(0.0).sqrt();
    let w = eps.powf(5.0 / 6.0);
    if 2.0 * w >= h {
        return Err(Error::InvalidParameter(format!(
            "wall window 2ε^(5/6) = {} exceeds H = {h}",
            2.0 * w
        )));
    }
    let bridge = |y: f64| c * (c * y / eps).tanh();
    let outer = |y: f64| prof.u_at(y)[0];
    let mut ys = Vec::with_capacity(n + 1);
    let mut us = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let y = if k == n { h } else { -h + 2.0 * h * k as f64 / n as f64 };
        let ay = y.abs();
        let u2 = prof.u2_at(y);
        let u1 = if ay <= w {
            bridge(y)
        } else if ay <= 2.0 * w {
            let sg = y.signum();
            let from = bridge(sg * w);
            let to = outer(sg * 2.0 * w);
            from + (to - from) * (ay - w) / w
        } else {
            outer(y)
        };
        ys.push(y);
        us.push([u1, u2]);
    }
    Ok(GridProfile1D { y: ys, u: us })
}

/// One rung of an ε-ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderRow {
    pub eps: f64,
    pub energy: f64,
    pub gap: f64,
}

/// Relaxed energies of the recovery profiles along `eps_list`, with the
/// gap to the limit minimum. `nodes_per_eps` sets the resolution.
pub fn epsilon_ladder(l: f64, h: f64, a: f64, eps_list: &[f64], nodes_per_eps: f64) -> Result<Vec<LadderRow>> {
    let e0 = min_energy_1d(l / h, a)?;
    eps_list
        .iter()
        .map(|&eps| {
            let n = ((2.0 * h / eps) * nodes_per_eps).ceil() as usize;
            let prof = recovery_profile_1d(eps, l, h, a, n)?;
            let p = Params {
                l,
                eps,
                h,
                a,
                ..Default::default()
            };
            let e = eval_E_eps_1d(&prof, &p)?.total;
            Ok(LadderRow {
                eps,
                energy: e,
                gap: e - e0,
            })
        })
        .collect()
}
