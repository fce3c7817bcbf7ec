//! The cross-tie critical point on the periodic strip (−T, T) × (−H, H)
//! with u = (±1, 0) on y = ±H, and the explicit divergence-free cross-tie
//! map of unit period.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::characteristics::{
    check_foliation, CharacteristicFamily, FamilyPoint, PiecewiseCriticalField, SeedPoint,
};
use crate::energy::{eval_E0_piecewise_with, integrate_wall, EnergyBreakdown, QuadSpec};
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::grid::Grid2D;
use crate::jump::{WallCurve, WallSample};
use crate::numerics::{bisect, brent, polish_newton};
use crate::params::Params;
use crate::rect1d::min_energy_1d;

/// ℓ(√(ℓ² + 4T̃²) − ℓ) − 8T̃³(1 − T̃²)/(T̃² + 1)².
pub fn tdln_residual(l_over_h: f64, tt: f64) -> f64 {
    let l = l_over_h;
    l * ((l * l + 4.0 * tt * tt).sqrt() - l) - 8.0 * tt.powi(3) * (1.0 - tt * tt) / (tt * tt + 1.0).powi(2)
}

/// Half-period T̃ = T/H of the cross-tie cell, on the branch where the
/// angle α t₁* lies in (π/4, π/2).
#[allow(non_snake_case)]
pub fn solve_Ttilde(l_over_h: f64) -> Result<f64> {
    if !(l_over_h > 0.0 && l_over_h.is_finite()) {
        return Err(Error::InvalidParameter(format!("L/H must be positive (got {l_over_h})")));
    }
    let l = l_over_h;
    // Divided by 4T̃²ℓ/(…) to avoid cancellation for small ℓ.
    let f = move |tt: f64| l / ((l * l + 4.0 * tt * tt).sqrt() + l) - 2.0 * tt * (1.0 - tt * tt) / (1.0 + tt * tt).powi(2);
    let lo = FRAC_PI_8.tan();
    let root = brent(f, lo, 1.0, 1e-16)?;
    Ok(polish_newton(f, root, lo, 1.0, 2))
}

/// L/H from T̃ via ζ = 2x(x²−1)/(x²+1)², Λ = (1−2ζ)/ζ², L/T = 2/√Λ, x = 1/T̃.
pub fn l_over_h_from_ttilde(tt: f64) -> f64 {
    let x = 1.0 / tt;
    let zeta = 2.0 * x * (x * x - 1.0) / (x * x + 1.0).powi(2);
    let lambda = (1.0 - 2.0 * zeta) / (zeta * zeta);
    tt * 2.0 / lambda.sqrt()
}

/// sin 2θ₃(s, 0) = (−1 + √(1+2λ))/λ with λ = 2s²/L², written as 2/(1 + √(1+2λ)).
fn sin2theta3(s: f64, l: f64) -> f64 {
    let lambda = 2.0 * s * s / (l * l);
    2.0 / (1.0 + (1.0 + 2.0 * lambda).sqrt())
}

/// (1 − cos αs) sin 2β − Lα(cos β − cos αs).
pub fn f_region2(beta: f64, s: f64, alpha: f64, l: f64) -> f64 {
    let c = (alpha * s).cos();
    (1.0 - c) * (2.0 * beta).sin() - l * alpha * (beta.cos() - c)
}

/// Terminal angle θ₂*(s) on the wall x = 0.
pub fn theta2_star(s: f64, alpha: f64, l: f64) -> Result<f64> {
    let a = alpha * s;
    if a <= 0.0 {
        return Ok(0.0);
    }
    let f = move |b: f64| f_region2(b, s, alpha, l);
    bisect(f, 0.0, a, 1e-15 * a.max(1e-300))
        .map(|b| polish_newton(f, b, 0.0, a, 2))
        .map_err(|e| Error::RootFailure {
            region: "II".into(),
            s,
            reason: e.to_string(),
        })
}

#[derive(Debug, Clone)]
pub struct CrossTieSolution {
    pub l: f64,
    pub h: f64,
    pub l_over_h: f64,
    pub t_tilde: f64,
    /// Half-period T = H T̃.
    pub t: f64,
    pub alpha: f64,
    pub t1_star: f64,
    pub region1: CharacteristicFamily,
    pub region2: CharacteristicFamily,
    pub region3: CharacteristicFamily,
    /// y = 0 from region III seeds, x = 0 from region III and region II terminals.
    pub walls: Vec<WallCurve>,
}

fn terminal_wall(fam: &CharacteristicFamily, label: &str, normal: [f64; 2], multiplicity: f64) -> WallCurve {
    let fam = fam.clone();
    let (lo, hi) = fam.s_range;
    WallCurve {
        label: label.into(),
        range: (lo, hi),
        multiplicity,
        boundary: false,
        curvature: Some(0.0),
        eval: Arc::new(move |s: f64| {
            let p = fam.terminal(s)?;
            let h = 1e-6 * (hi - lo);
            let (a, b) = ((s - h).max(lo), (s + h).min(hi));
            let (pa, pb) = (fam.terminal(a)?, fam.terminal(b)?);
            let speed = (pb.x - pa.x).hypot(pb.y - pa.y) / (b - a);
            let plus = [p.theta.cos(), p.theta.sin()];
            Ok(WallSample {
                point: [0.0, p.y],
                speed,
                normal,
                plus,
                minus: [plus[0], -plus[1]],
                div_plus: p.v,
                div_minus: -p.v,
            })
        }),
    }
}

/// Three-family construction on the quarter cell (0, T) × (0, H).
pub fn build_crosstie(l: f64, h: f64) -> Result<CrossTieSolution> {
    if !(l > 0.0 && h > 0.0) {
        return Err(Error::InvalidParameter(format!("L, H > 0 (got L={l}, H={h})")));
    }
    let tt = solve_Ttilde(l / h)?;
    let t = h * tt;
    let alpha = 2.0 * t / (t * t + h * h);
    let t1_star = 2.0 * (t / h).atan() / alpha;

    // Region I: arcs from (s, H) through (T, 0), traversed downward.
    let region1 = CharacteristicFamily::new(
        "I",
        (0.0, t),
        Arc::new(move |s: f64| {
            let d = t - s;
            Ok(SeedPoint {
                x0: s,
                y0: h,
                theta0: PI,
                v0: 2.0 * d / (d * d + h * h),
            })
        }),
        Arc::new(move |s: f64| {
            let d = t - s;
            let v = 2.0 * d / (d * d + h * h);
            Ok(if v < 1e-12 { h } else { (h * v).min(1.0).asin() / v })
        }),
    )
    .with_reversed(true)
    .with_multiplicity(4.0);

    // Region III: arcs from (s, 0) to (0, s).
    let region3 = CharacteristicFamily::new(
        "III",
        (0.0, t),
        Arc::new(move |s: f64| {
            let sn = sin2theta3(s, l);
            Ok(SeedPoint {
                x0: s,
                y0: 0.0,
                theta0: 0.5 * (PI - sn.asin()),
                v0: -sn / l,
            })
        }),
        Arc::new(move |s: f64| {
            let sn = sin2theta3(s, l);
            let th0 = 0.5 * (PI - sn.asin());
            Ok((FRAC_PI_2 - 2.0 * th0) / (-sn / l))
        }),
    )
    .with_multiplicity(4.0);

    // Region II: arcs leaving Γ tangentially and ending on x = 0.
    let seed2 = move |s: f64| -> Result<(SeedPoint, f64)> {
        let a = alpha * s;
        let beta = theta2_star(s, alpha, l)?;
        Ok((
            SeedPoint {
                x0: (1.0 - a.cos()) / alpha,
                y0: h - a.sin() / alpha,
                theta0: a,
                v0: -(2.0 * beta).sin() / l,
            },
            beta,
        ))
    };
    let region2 = CharacteristicFamily::new(
        "II",
        (0.0, t1_star),
        Arc::new(move |s: f64| seed2(s).map(|p| p.0)),
        Arc::new(move |s: f64| {
            let (p, beta) = seed2(s)?;
            if p.v0 == 0.0 {
                return Ok(0.0);
            }
            Ok(((beta - p.theta0) / p.v0).max(0.0))
        }),
    )
    .with_multiplicity(4.0);

    let fam3 = region3.clone();
    let bottom = WallCurve {
        label: "y=0".into(),
        range: (0.0, t),
        multiplicity: 2.0,
        boundary: false,
        curvature: Some(0.0),
        eval: Arc::new(move |s: f64| {
            let p = fam3.point(s, 0.0)?;
            let plus = [p.theta.cos(), p.theta.sin()];
            Ok(WallSample {
                point: [s, 0.0],
                speed: 1.0,
                normal: [0.0, -1.0],
                plus,
                minus: [-plus[0], plus[1]],
                div_plus: p.v,
                div_minus: -p.v,
            })
        }),
    };
    let walls = vec![
        bottom,
        terminal_wall(&region3, "x=0/III", [-1.0, 0.0], 2.0),
        terminal_wall(&region2, "x=0/II", [-1.0, 0.0], 2.0),
    ];
    Ok(CrossTieSolution {
        l,
        h,
        l_over_h: l / h,
        t_tilde: tt,
        t,
        alpha,
        t1_star,
        region1,
        region2,
        region3,
        walls,
    })
}

impl CrossTieSolution {
    /// The cross-tie sampled on `grid`, which must be the periodic
    /// rectangle (−T, T) × (−H, H) of this solution. Arcs are sampled at
    /// about four points per node, mirrored into the four quarters and
    /// scattered to the nearest node; nodes hit by no sample take the
    /// normalized mean of their filled neighbours.
    pub fn sample_on_grid(&self, grid: &Grid2D) -> Result<Field2D> {
        let fits = (grid.x0 + self.t).abs() < 1e-9 * self.t
            && (grid.x1 - self.t).abs() < 1e-9 * self.t
            && (grid.y0 + self.h).abs() < 1e-9 * self.h
            && (grid.y1 - self.h).abs() < 1e-9 * self.h;
        if grid.is_polar() || !grid.periodic_x || !fits {
            return Err(Error::InvalidExtents(format!(
                "need the periodic rectangle (−{0}, {0}) × (−{1}, {1})",
                self.t, self.h
            )));
        }
        let (ni, nj) = grid.node_counts();
        let (dx, dy) = grid.spacing();
        let mut sum = vec![[0.0f64; 2]; grid.len()];
        let mut hits = vec![0usize; grid.len()];
        let n = 4 * ni.max(nj);
        for fam in [&self.region1, &self.region2, &self.region3] {
            let (lo, hi) = fam.s_range;
            let rows: Vec<Vec<FamilyPoint>> = (0..=n)
                .into_par_iter()
                .map(|a| {
                    let s = lo + (hi - lo) * a as f64 / n as f64;
                    let ts = fam.t_star(s)?;
                    (0..=n).map(|b| fam.point(s, ts * b as f64 / n as f64)).collect()
                })
                .collect::<Result<_>>()?;
            for p in rows.iter().flatten() {
                let u = [p.theta.cos(), p.theta.sin()];
                for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let (x, y) = (sx * p.x, sy * p.y);
                    let i = ((x - grid.x0) / dx).round() as usize % ni;
                    let j = ((y - grid.y0) / dy).round() as usize;
                    if j >= nj {
                        continue;
                    }
                    let k = grid.index(i, j);
                    sum[k][0] += sy * u[0];
                    sum[k][1] += sx * u[1];
                    hits[k] += 1;
                }
            }
        }
        let unit = |v: [f64; 2]| {
            let r = v[0].hypot(v[1]);
            if r > 0.0 {
                [v[0] / r, v[1] / r]
            } else {
                [1.0, 0.0]
            }
        };
        let mut values: Vec<Option<[f64; 2]>> = sum
            .iter()
            .zip(&hits)
            .map(|(v, &h)| (h > 0).then(|| unit(*v)))
            .collect();
        while values.iter().any(Option::is_none) {
            let prev = values.clone();
            for j in 0..nj {
                for i in 0..ni {
                    let k = grid.index(i, j);
                    if prev[k].is_some() {
                        continue;
                    }
                    let mut acc = [0.0; 2];
                    let mut found = false;
                    let nbrs = [
                        Some(grid.index((i + 1) % ni, j)),
                        Some(grid.index((i + ni - 1) % ni, j)),
                        (j + 1 < nj).then(|| grid.index(i, j + 1)),
                        (j > 0).then(|| grid.index(i, j - 1)),
                    ];
                    for q in nbrs.into_iter().flatten() {
                        if let Some(v) = prev[q] {
                            acc[0] += v[0];
                            acc[1] += v[1];
                            found = true;
                        }
                    }
                    if found {
                        values[k] = Some(unit(acc));
                    }
                }
            }
        }
        Field2D::new(grid.clone(), values.into_iter().map(|v| v.expect("filled")).collect())
    }
}

/// Invariant residuals of a built cross-tie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTieChecks {
    /// |θ₃(T, 0) − α t₁*|: the terminal arcs of I and III are tangent at (T, 0).
    pub tangency: f64,
    /// max |L v + sin 2θ| on both walls.
    pub wall_residual: f64,
    pub theta2_monotone: bool,
    pub alpha_t1: f64,
    /// |θ⁺ − θ⁻| across Γ (region I vs region II).
    pub gamma_theta_jump: f64,
    /// min |v⁺ − v⁻| across Γ.
    pub gamma_div_jump: f64,
    pub foliation_ok: [bool; 3],
    /// Quarter-cell area minus the three family areas.
    pub area_defect: f64,
}

impl CrossTieSolution {
    pub fn as_piecewise(&self) -> PiecewiseCriticalField {
        PiecewiseCriticalField {
            domain: format!("cross-tie cell (−{0}, {0}) × (−{1}, {1})", self.t, self.h),
            families: vec![self.region1.clone(), self.region2.clone(), self.region3.clone()],
            walls: self.walls.clone(),
        }
    }

    pub fn checks(&self, samples: usize) -> Result<CrossTieChecks> {
        let l = self.l;
        let th3 = self.region3.point(self.t, 0.0)?.theta;
        let tangency = (th3 - self.alpha * self.t1_star).abs();
        let mut wall_residual: f64 = 0.0;
        let mut theta2_monotone = true;
        let mut prev = f64::NEG_INFINITY;
        let (mut gth, mut gdv) = (0.0f64, f64::INFINITY);
        for k in 0..=samples {
            let f = k as f64 / samples as f64;
            let s3 = self.t * f;
            let p0 = self.region3.point(s3, 0.0)?;
            wall_residual = wall_residual.max((l * p0.v + (2.0 * p0.theta).sin()).abs());
            let p1 = self.region3.terminal(s3)?;
            wall_residual = wall_residual.max((l * p1.v + (2.0 * p1.theta).sin()).abs());
            let s2 = self.t1_star * f;
            let q = self.region2.terminal(s2)?;
            wall_residual = wall_residual.max((l * q.v + (2.0 * q.theta).sin()).abs());
            if k > 0 {
                let th = theta2_star(s2, self.alpha, l)?;
                if !(th > prev) {
                    theta2_monotone = false;
                }
                prev = th;
                let g = self.region1.point(0.0, s2)?;
                let q0 = self.region2.point(s2, 0.0)?;
                let dth = (g.theta - q0.theta + PI).rem_euclid(2.0 * PI) - PI;
                gth = gth.max(dth.abs());
                gdv = gdv.min((g.v - q0.v).abs());
            }
        }
        let mut foliation_ok = [false; 3];
        let mut area = 0.0;
        for (i, fam) in [&self.region1, &self.region2, &self.region3].into_iter().enumerate() {
            let rep = check_foliation(fam, 32, 32)?;
            foliation_ok[i] = rep.sign_consistent && rep.crossings == 0;
            area += fam.area(64, 64, 8)?;
        }
        Ok(CrossTieChecks {
            tangency,
            wall_residual,
            theta2_monotone,
            alpha_t1: self.alpha * self.t1_star,
            gamma_theta_jump: gth,
            gamma_div_jump: gdv,
            foliation_ok,
            area_defect: self.t * self.h - area,
        })
    }

    /// Energy of one period cell.
    pub fn cell_energy(&self, quad: QuadSpec) -> Result<EnergyBreakdown> {
        let params = Params {
            l: self.l,
            h: self.h,
            t: self.t,
            ..Default::default()
        };
        eval_E0_piecewise_with(&self.as_piecewise(), &params, quad)
    }

    /// (x, y, u1, u2, v) on an `nx × ny` lattice of the quarter cell.
    pub fn write_quarter_csv<W: Write>(&self, ns: usize, nt: usize, mut w: W) -> Result<()> {
        writeln!(w, "region,s,t,x,y,u1,u2,div")?;
        for fam in [&self.region1, &self.region2, &self.region3] {
            let (lo, hi) = fam.s_range;
            for i in 0..=ns {
                let s = lo + (hi - lo) * i as f64 / ns as f64;
                let ts = fam.t_star(s)?;
                for j in 0..=nt {
                    let tv = ts * j as f64 / nt as f64;
                    let p = fam.point(s, tv)?;
                    writeln!(
                        w,
                        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        fam.label,
                        s,
                        tv,
                        p.x,
                        p.y,
                        p.theta.cos(),
                        p.theta.sin(),
                        p.v
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// E_0 per unit length in x of the cross-tie at ratio L/H.
pub fn crosstie_energy_per_length(sol: &CrossTieSolution, quad: QuadSpec) -> Result<f64> {
    Ok(sol.cell_energy(quad)?.total / (2.0 * sol.t))
}

/// One row of the cross-tie versus 1D comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub l_over_h: f64,
    pub e_crosstie: f64,
    pub e_1d: f64,
    pub gap: f64,
}

fn sweep_row(r: f64, quad: QuadSpec) -> Result<SweepRow> {
    let sol = build_crosstie(r, 1.0)?;
    let e = crosstie_energy_per_length(&sol, quad)?;
    let e1 = min_energy_1d(r, 0.0)?;
    Ok(SweepRow {
        l_over_h: r,
        e_crosstie: e,
        e_1d: e1,
        gap: e - e1,
    })
}

/// Cross-tie and 1D energies per unit length at `lmin, lmin + step, …, lmax`.
pub fn crosstie_sweep(lmin: f64, lmax: f64, step: f64, quad: QuadSpec) -> Result<Vec<SweepRow>> {
    if !(lmin > 0.0 && lmax >= lmin && step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lmin <= lmax and step > 0 (got {lmin}, {lmax}, {step})"
        )));
    }
    let n = ((lmax - lmin) / step + 1e-9).floor() as usize;
    (0..=n)
        .into_par_iter()
        .map(|k| sweep_row(lmin + step * k as f64, quad))
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    writeln!(w, "L_over_H,E_crosstie,E_1d,gap")?;
    for r in rows {
        writeln!(w, "{:.10},{:.16e},{:.16e},{:.16e}", r.l_over_h, r.e_crosstie, r.e_1d, r.gap)?;
    }
    Ok(())
}

/// Sign changes of the energy gap, refined by bisection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub l0: Option<f64>,
    pub l1: Option<f64>,
    pub all: Vec<f64>,
}

/// Scan L/H on [0.5, 3] with step 0.01 and bisect each sign change to 1e-6.
pub fn find_crossing(quad: QuadSpec) -> Result<Crossing> {
    find_crossing_in(0.5, 3.0, 0.01, 1e-6, quad)
}

pub fn find_crossing_in(lmin: f64, lmax: f64, step: f64, tol: f64, quad: QuadSpec) -> Result<Crossing> {
    crossing_from_rows(&crosstie_sweep(lmin, lmax, step, quad)?, tol, quad)
}

/// Bisect every sign change of the gap in an existing sweep.
pub fn crossing_from_rows(rows: &[SweepRow], tol: f64, quad: QuadSpec) -> Result<Crossing> {
    let brackets: Vec<(f64, f64)> = rows
        .windows(2)
        .filter(|w| w[0].gap.signum() != w[1].gap.signum())
        .map(|w| (w[0].l_over_h, w[1].l_over_h))
        .collect();
    let roots: Vec<f64> = brackets
        .into_par_iter()
        .map(|(a, b)| {
            let g = |r: f64| sweep_row(r, quad).map(|x| x.gap).unwrap_or(f64::NAN);
            bisect(g, a, b, tol)
        })
        .collect::<Result<_>>()?;
    Ok(Crossing {
        l0: roots.first().copied(),
        l1: if roots.len() > 1 { roots.last().copied() } else { None },
        all: roots,
    })
}

/// The unit-period cross-tie map: six angular sectors on |x| < 1/2.
pub fn remark_crosstie_map(x: f64, y: f64) -> [f64; 2] {
    let xr = x - (x + 0.5).floor();
    let mut th = y.atan2(xr);
    if th < 0.0 {
        th += 2.0 * PI;
    }
    let c = FRAC_1_SQRT_2;
    if th <= FRAC_PI_4 {
        [c, -c]
    } else if th <= 3.0 * FRAC_PI_4 {
        [th.sin(), -th.cos()]
    } else if th <= PI {
        [c, c]
    } else if th <= 5.0 * FRAC_PI_4 {
        [-c, c]
    } else if th <= 7.0 * FRAC_PI_4 {
        [th.sin(), -th.cos()]
    } else {
        [-c, -c]
    }
}

fn remark_wall(label: &str, range: (f64, f64), horizontal: bool) -> WallCurve {
    let d = 1e-13;
    WallCurve {
        label: label.into(),
        range,
        multiplicity: 1.0,
        boundary: false,
        curvature: Some(0.0),
        eval: Arc::new(move |s: f64| {
            let (point, plus, minus, normal) = if horizontal {
                (
                    [s, 0.0],
                    remark_crosstie_map(s, d),
                    remark_crosstie_map(s, -d),
                    [0.0, -1.0],
                )
            } else {
                (
                    [0.5, s],
                    remark_crosstie_map(0.5 + d, s),
                    remark_crosstie_map(0.5 - d, s),
                    [-1.0, 0.0],
                )
            };
            Ok(WallSample {
                point,
                speed: 1.0,
                normal,
                plus,
                minus,
                div_plus: 0.0,
                div_minus: 0.0,
            })
        }),
    }
}

/// (4/3)∫_Y^∞ (1 + 4y²)^{−3/2} dy.
pub fn remark_tail(y: f64) -> f64 {
    4.0 / 3.0 * 0.5 * (1.0 - 2.0 * y / (1.0 + 4.0 * y * y).sqrt())
}

/// Wall energy per period of the cross-tie map: quadrature on |y| ≤ `y_cut`
/// plus the analytic tails beyond.
pub fn remark_crosstie_energy(y_cut: f64) -> Result<f64> {
    if !(y_cut > 0.5) {
        return Err(Error::InvalidParameter(format!("y_cut must exceed 1/2 (got {y_cut})")));
    }
    let walls = [
        remark_wall("y=0,x<0", (-0.5, 0.0), true),
        remark_wall("y=0,x>0", (0.0, 0.5), true),
        remark_wall("x=1/2,low", (-y_cut, -0.5), false),
        remark_wall("x=1/2,mid", (-0.5, 0.5), false),
        remark_wall("x=1/2,high", (0.5, y_cut), false),
    ];
    let mut e = 2.0 * remark_tail(y_cut);
    for w in &walls {
        e += integrate_wall(w, 64, 8)?;
    }
    Ok(e)
}
