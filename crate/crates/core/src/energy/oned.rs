use crate::error::{Error, Result};
use crate::params::Params;
use crate::rect1d::OneDProfile;

use super::EnergyBreakdown;

/// A profile sampled on a 1D grid `y` over [−H, H].
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile1D {
    pub y: Vec<f64>,
    pub u: Vec<[f64; 2]>,
}

impl GridProfile1D {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "y,u1,u2")?;
        for (y, u) in self.y.iter().zip(&self.u) {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", y, u[0], u[1])?;
        }
        Ok(())
    }
}

/// (1/2)∫ ε|u′|² + (1/ε)(|u|²−1)² + L(u₂′)² dy. Derivatives are taken on
/// grid intervals, the potential with the trapezoid rule.
#[allow(non_snake_case)]
pub fn eval_E_eps_1d(profile: &GridProfile1D, params: &Params) -> Result<EnergyBreakdown> {
    let n = profile.y.len();
    if n < 2 || profile.u.len() != n {
        return Err(Error::InvalidParameter("profile needs >= 2 matching samples".into()));
    }
    let c = (1.0 - params.a * params.a).sqrt();
    let lo = profile.u[0];
    let hi = profile.u[n - 1];
    let bc_err = (lo[0] + c).abs().max((lo[1] - params.a).abs())
        .max((hi[0] - c).abs())
        .max((hi[1] - params.a).abs());
    if bc_err > 1e-12 {
        return Err(Error::BoundaryCondition(format!(
            "u(±H) must equal (±√(1−a²), a); mismatch {bc_err:e}"
        )));
    }
    let (mut g, mut d, mut p) = (0.0, 0.0, 0.0);
    for k in 0..n - 1 {
        let h = profile.y[k + 1] - profile.y[k];
        let d1 = (profile.u[k + 1][0] - profile.u[k][0]) / h;
        let d2 = (profile.u[k + 1][1] - profile.u[k][1]) / h;
        g += 0.5 * params.eps * (d1 * d1 + d2 * d2) * h;
        d += 0.5 * params.l * d2 * d2 * h;
        let w = |u: [f64; 2]| {
            let m = u[0] * u[0] + u[1] * u[1] - 1.0;
            m * m
        };
        p += 0.5 / params.eps * 0.5 * h * (w(profile.u[k]) + w(profile.u[k + 1]));
    }
    Ok(EnergyBreakdown {
        grad: g,
        potential: p,
        bulk_div: d,
        ..Default::default()
    }
    .finish())
}

/// Limit 1D energy of a piecewise-linear u₂ with u₁ = ±√(1−u₂²): exact
/// segment integrals, interior wall costs and the two boundary terms.
#[allow(non_snake_case)]
pub fn eval_E0_1d(profile: &OneDProfile, params: &Params) -> Result<EnergyBreakdown> {
    let ys = &profile.breakpoints;
    let u2 = &profile.u2;
    let n = ys.len();
    if n < 2 || u2.len() != n || profile.signs.len() != n - 1 {
        return Err(Error::InvalidParameter("malformed 1D profile".into()));
    }
    if let Some(index) = u2.iter().position(|v| v.abs() > 1.0 + 1e-10) {
        return Err(Error::NotUnit {
            index,
            norm: u2[index].abs(),
        });
    }
    let mut bulk = 0.0;
    for k in 0..n - 1 {
        let h = ys[k + 1] - ys[k];
        if h > 0.0 {
            let s = (u2[k + 1] - u2[k]) / h;
            bulk += 0.5 * params.l * s * s * h;
        }
    }
    let cost = |m: f64| {
        let c = (1.0 - m * m).max(0.0);
        4.0 / 3.0 * c * c.sqrt()
    };
    let mut walls = 0.0;
    for k in 1..n - 1 {
        if profile.signs[k - 1] != profile.signs[k] {
            walls += cost(u2[k]);
        }
    }
    let c = (1.0 - params.a * params.a).sqrt();
    let trace = |k: usize, sign: f64| [sign * (1.0 - u2[k] * u2[k]).max(0.0).sqrt(), u2[k]];
    let bottom = trace(0, profile.signs[0]);
    let top = trace(n - 1, profile.signs[n - 2]);
    let cube = |u: [f64; 2], g: [f64; 2]| {
        let d = (u[0] - g[0]).hypot(u[1] - g[1]);
        d * d * d / 6.0
    };
    let boundary = cube(bottom, [-c, params.a]) + cube(top, [c, params.a]);
    Ok(EnergyBreakdown {
        bulk_div: bulk,
        wall_interior: walls,
        wall_boundary: boundary,
        ..Default::default()
    }
    .finish())
}
