//! Radial critical points u = p(r) ê_r + q(r) ê_θ on the annulus 1 < r < R
//! with data −ê_θ on r = 1 and ê_θ on r = R, and a circular wall at r = ρ.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::characteristics::{CharacteristicArc, CharacteristicFamily, PiecewiseCriticalField, SeedPoint};
use crate::energy::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::jump::{WallCurve, WallSample};
use crate::numerics::{bisect, brent};

/// The two branches of p: A(r − 1/r) on (1, ρ) and −B(r − R²/r) on (ρ, R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProfile {
    pub rho: f64,
    pub a: f64,
    pub r_out: f64,
    pub inner: f64,
    pub outer: f64,
}

impl RadialProfile {
    pub fn p(&self, r: f64) -> f64 {
        if r <= self.rho {
            self.inner * (r - 1.0 / r)
        } else {
            -self.outer * (r - self.r_out * self.r_out / r)
        }
    }

    /// q = −√(1−p²) inside the wall, +√(1−p²) outside.
    pub fn q(&self, r: f64) -> f64 {
        let m = (1.0 - self.p(r).powi(2)).max(0.0).sqrt();
        if r <= self.rho {
            -m
        } else {
            m
        }
    }

    pub fn div(&self, r: f64) -> f64 {
        if r <= self.rho {
            2.0 * self.inner
        } else {
            -2.0 * self.outer
        }
    }

    pub fn field(&self, x: f64, y: f64) -> [f64; 2] {
        let r = x.hypot(y);
        let (c, s) = (x / r, y / r);
        let (p, q) = (self.p(r), self.q(r));
        [p * c - q * s, p * s + q * c]
    }

    /// Rows `r,p,q,div` at `n + 1` uniform radii.
    pub fn write_csv<W: Write>(&self, n: usize, mut w: W) -> Result<()> {
        writeln!(w, "r,p,q,div")?;
        for k in 0..=n {
            let r = 1.0 + (self.r_out - 1.0) * k as f64 / n as f64;
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", r, self.p(r), self.q(r), self.div(r))?;
        }
        Ok(())
    }
}

pub fn radial_p(rho: f64, a: f64, r: f64) -> Result<RadialProfile> {
    if !(r > 1.0) {
        return Err(Error::InvalidParameter(format!("annulus needs R > 1 (got {r})")));
    }
    if !(rho > 1.0 && rho < r) {
        return Err(Error::InvalidParameter(format!("wall radius must lie in (1, R) (got ρ={rho}, R={r})")));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!("a must lie in [0, 1] (got {a})")));
    }
    Ok(RadialProfile {
        rho,
        a,
        r_out: r,
        inner: a * rho / (rho * rho - 1.0),
        outer: a * rho / (r * r - rho * rho),
    })
}

/// 2πL a²ρ²(1/(ρ²−1) + 1/(R²−ρ²)) + (8/3)πρ(1−a²)^{3/2}, itemized.
pub fn annulus_energy_breakdown(rho: f64, a: f64, r: f64, l: f64) -> EnergyBreakdown {
    let bulk = if a == 0.0 {
        0.0
    } else {
        let r2 = rho * rho;
        TAU * l * a * a * r2 * (1.0 / (r2 - 1.0) + 1.0 / (r * r - r2))
    };
    EnergyBreakdown {
        bulk_div: bulk,
        wall_interior: 8.0 / 3.0 * PI * rho * (1.0 - a * a).powf(1.5),
        ..Default::default()
    }
    .finish()
}

pub fn annulus_energy(rho: f64, a: f64, r: f64, l: f64) -> f64 {
    annulus_energy_breakdown(rho, a, r, l).total
}

/// 2aLρ(1/(ρ²−1) + 1/(R²−ρ²)) − 4a√(1−a²).
pub fn nbc_residual(rho: f64, a: f64, r: f64, l: f64) -> f64 {
    let r2 = rho * rho;
    2.0 * a * l * rho * (1.0 / (r2 - 1.0) + 1.0 / (r * r - r2)) - 4.0 * a * (1.0 - a * a).sqrt()
}

/// 4a²ρ²/(R²−ρ²)² − 4a²ρ²/(ρ²−1)² + (8/(3Lρ))√(1−a²)(1+2a²).
pub fn jump_residual(rho: f64, a: f64, r: f64, l: f64) -> f64 {
    let r2 = rho * rho;
    let k = 4.0 * a * a * r2;
    k / (r * r - r2).powi(2) - k / (r2 - 1.0).powi(2)
        + 8.0 / (3.0 * l * rho) * (1.0 - a * a).sqrt() * (1.0 + 2.0 * a * a)
}

/// a² as a function of z = ρ² from the wall equations.
pub fn a_squared(z: f64, r: f64) -> f64 {
    (z - 1.0) * (r * r - z) / (-4.0 * z * z + (1.0 + r * r) * z + 2.0 * r * r)
}

/// ρ² for the wall with normal trace a = 1/2.
pub fn rho_squared_half(r: f64) -> f64 {
    2.0 * r * r / (r * r + 1.0)
}

pub fn g_rl(z: f64, r: f64, l: f64) -> f64 {
    let r2 = r * r;
    l * l * (r2 - 1.0).powi(2) * z * (z * z - (1.0 + r2) * z / 4.0 - r2 / 2.0)
        + 3.0 * (r2 - z * z) * (z - 1.0).powi(2) * (r2 - z).powi(2)
}

/// (8/3)(R²−1)/(R²+1)(1 − √2R/√(R²+1)(3/4)^{3/2}).
pub fn small_l_interior_bound(r: f64) -> f64 {
    let r2 = r * r;
    8.0 / 3.0 * (r2 - 1.0) / (r2 + 1.0) * (1.0 - 2f64.sqrt() * r / (r2 + 1.0).sqrt() * 0.75f64.powf(1.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnulusRegime {
    InteriorWall,
    InnerBoundaryWall,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusRadialSolution {
    pub r: f64,
    pub l: f64,
    pub rho: f64,
    pub a: f64,
    pub wall_at_boundary: bool,
    pub p_coeffs: [f64; 2],
    pub energy: EnergyBreakdown,
}

impl AnnulusRadialSolution {
    pub fn regime(&self) -> AnnulusRegime {
        if self.wall_at_boundary {
            AnnulusRegime::InnerBoundaryWall
        } else {
            AnnulusRegime::InteriorWall
        }
    }

    pub fn profile(&self) -> Option<RadialProfile> {
        (!self.wall_at_boundary).then(|| RadialProfile {
            rho: self.rho,
            a: self.a,
            r_out: self.r,
            inner: self.p_coeffs[0],
            outer: self.p_coeffs[1],
        })
    }
}

/// Sign bookkeeping of the scan of g on (1, R). On this interval a²(z)
/// increases from 0 to 1 and both sides of the normal-trace condition are
/// positive, so every root is a genuine wall.
#[derive(Debug, Clone, PartialEq)]
pub struct GScan {
    pub g_lo: f64,
    pub g_hi: f64,
    pub roots: Vec<f64>,
}

pub fn scan_g(r: f64, l: f64) -> Result<GScan> {
    let lo = 1.0 + 1e-9;
    let hi = r - 1e-9;
    let n = 4096;
    let zs: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let gs: Vec<f64> = zs.iter().map(|&z| g_rl(z, r, l)).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        if gs[k] == 0.0 {
            roots.push(zs[k]);
        } else if gs[k] * gs[k + 1] < 0.0 {
            roots.push(brent(|z| g_rl(z, r, l), zs[k], zs[k + 1], 1e-15)?);
        }
    }
    Ok(GScan {
        g_lo: gs[0],
        g_hi: gs[n],
        roots,
    })
}

/// The lowest-energy interior critical wall, if g has a root in (1, R)
/// that passes both wall equations.
pub fn solve_interior_wall(r: f64, l: f64) -> Result<Option<AnnulusRadialSolution>> {
    if !(r > 1.0 && l > 0.0) {
        return Err(Error::InvalidParameter(format!("need R > 1, L > 0 (got R={r}, L={l})")));
    }
    let scan = scan_g(r, l)?;
    let mut best: Option<AnnulusRadialSolution> = None;
    for z in scan.roots {
        let a2 = a_squared(z, r);
        if !(a2 > 0.0 && a2 < 1.0) {
            continue;
        }
        let (rho, a) = (z.sqrt(), a2.sqrt());
        let scale = 1.0 + 1.0 / (z - 1.0).powi(2) + 1.0 / (r * r - z).powi(2);
        if nbc_residual(rho, a, r, l).abs() > 1e-10 * scale || jump_residual(rho, a, r, l).abs() > 1e-10 * scale {
            continue;
        }
        let prof = radial_p(rho, a, r)?;
        let sol = AnnulusRadialSolution {
            r,
            l,
            rho,
            a,
            wall_at_boundary: false,
            p_coeffs: [prof.inner, prof.outer],
            energy: annulus_energy_breakdown(rho, a, r, l),
        };
        if best.map_or(true, |b| sol.energy.total < b.energy.total) {
            best = Some(sol);
        }
    }
    Ok(best)
}

/// u = ê_θ with the wall on r = 1: energy 8π/3.
pub fn inner_boundary_solution(r: f64, l: f64) -> AnnulusRadialSolution {
    AnnulusRadialSolution {
        r,
        l,
        rho: 1.0,
        a: 0.0,
        wall_at_boundary: true,
        p_coeffs: [0.0, 0.0],
        energy: EnergyBreakdown {
            wall_boundary: 8.0 / 3.0 * PI,
            ..Default::default()
        }
        .finish(),
    }
}

/// The interior wall when one exists and beats 8π/3, else the inner-boundary wall.
pub fn annulus_radial_minimizer(r: f64, l: f64) -> Result<AnnulusRadialSolution> {
    let boundary = inner_boundary_solution(r, l);
    Ok(match solve_interior_wall(r, l)? {
        Some(s) if s.energy.total < boundary.energy.total => s,
        _ => boundary,
    })
}

fn radius_time(arc: &CharacteristicArc, target: f64, start: f64) -> Result<f64> {
    let f = |t: f64| {
        let p = arc.eval(t);
        p.x.hypot(p.y) - target
    };
    let mut hi = (target - start).abs().max(1e-3);
    while f(hi).signum() == f(0.0).signum() {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NoConvergence { x: target, y: start });
        }
    }
    bisect(f, 0.0, hi, 1e-15)
}

/// Characteristic families and the circular wall of a radial configuration.
pub fn annulus_piecewise(rho: f64, a: f64, r: f64) -> Result<PiecewiseCriticalField> {
    let prof = radial_p(rho, a, r)?;
    let vin = prof.div(1.0);
    let vout = prof.div(r);
    let tin = radius_time(&CharacteristicArc::new(1.0, 0.0, -FRAC_PI_2, vin, 0.0)?, rho, 1.0)?;
    let tout = radius_time(&CharacteristicArc::new(r, 0.0, FRAC_PI_2, vout, 0.0)?, rho, r)?;
    let inner = CharacteristicFamily::new(
        "inner",
        (0.0, TAU),
        Arc::new(move |s: f64| {
            Ok(SeedPoint {
                x0: s.cos(),
                y0: s.sin(),
                theta0: s - FRAC_PI_2,
                v0: vin,
            })
        }),
        Arc::new(move |_| Ok(tin)),
    );
    let outer = CharacteristicFamily::new(
        "outer",
        (0.0, TAU),
        Arc::new(move |s: f64| {
            Ok(SeedPoint {
                x0: r * s.cos(),
                y0: r * s.sin(),
                theta0: s + FRAC_PI_2,
                v0: vout,
            })
        }),
        Arc::new(move |_| Ok(tout)),
    );
    let m = (1.0 - a * a).sqrt();
    let wall = WallCurve {
        label: "r=rho".into(),
        range: (0.0, TAU),
        multiplicity: 1.0,
        boundary: false,
        curvature: Some(-1.0 / rho),
        eval: Arc::new(move |s: f64| {
            let (sn, c) = s.sin_cos();
            let (er, et) = ([c, sn], [-sn, c]);
            Ok(WallSample {
                point: [rho * c, rho * sn],
                speed: rho,
                normal: [-c, -sn],
                plus: [a * er[0] + m * et[0], a * er[1] + m * et[1]],
                minus: [a * er[0] - m * et[0], a * er[1] - m * et[1]],
                div_plus: vout,
                div_minus: vin,
            })
        }),
    };
    Ok(PiecewiseCriticalField {
        domain: format!("annulus 1 < r < {r}, wall at {rho}"),
        families: vec![inner, outer],
        walls: vec![wall],
    })
}

/// u = ê_θ with the boundary wall on r = 1.
pub fn annulus_boundary_piecewise(r: f64) -> Result<PiecewiseCriticalField> {
    if !(r > 1.0) {
        return Err(Error::InvalidParameter(format!("annulus needs R > 1 (got {r})")));
    }
    let fam = CharacteristicFamily::new(
        "radii",
        (0.0, TAU),
        Arc::new(move |s: f64| {
            Ok(SeedPoint {
                x0: r * s.cos(),
                y0: r * s.sin(),
                theta0: s + FRAC_PI_2,
                v0: 0.0,
            })
        }),
        Arc::new(move |_| Ok(r - 1.0)),
    );
    let wall = WallCurve {
        label: "r=1".into(),
        range: (0.0, TAU),
        multiplicity: 1.0,
        boundary: true,
        curvature: None,
        eval: Arc::new(|s: f64| {
            let (sn, c) = s.sin_cos();
            Ok(WallSample {
                point: [c, sn],
                speed: 1.0,
                normal: [-c, -sn],
                plus: [-sn, c],
                minus: [sn, -c],
                div_plus: 0.0,
                div_minus: 0.0,
            })
        }),
    };
    Ok(PiecewiseCriticalField {
        domain: format!("annulus 1 < r < {r}, boundary wall at r=1"),
        families: vec![fam],
        walls: vec![wall],
    })
}
