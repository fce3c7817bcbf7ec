//! Disc constructions: tangential data (zero energy), radial data
//! (hedgehogs with constant divergence 2) and the degree −1 data
//! g = (x/R, −y/R) with diagonal walls.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::sync::Arc;

use crate::characteristics::{invert_family, CharacteristicFamily, PiecewiseCriticalField, SeedPoint};
use crate::error::{Error, Result};
use crate::jump::{WallCurve, WallSample};
use crate::numerics::{bisect, polish_newton};

/// ê_θ on the disc of radius `r`: characteristics are radii with v ≡ 0.
pub fn tangential_solution(r: f64) -> Result<PiecewiseCriticalField> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("R > 0 (got {r})")));
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
        Arc::new(move |_| Ok(r)),
    );
    Ok(PiecewiseCriticalField {
        domain: format!("disc R={r}, tangential data"),
        families: vec![fam],
        walls: vec![],
    })
}

/// u*± = r ê_r ± √(1−r²) ê_θ on the unit disc.
pub fn hedgehog_field(sign: f64, x: f64, y: f64) -> [f64; 2] {
    let r2 = x * x + y * y;
    let q = sign * (1.0 - r2).max(0.0).sqrt();
    let r = r2.sqrt();
    if r == 0.0 {
        return [0.0, sign];
    }
    // r ê_r + q ê_θ with ê_r = (x, y)/r and ê_θ = (−y, x)/r.
    [x - q * y / r, y + q * x / r]
}

/// The hedgehog as a characteristic family: arcs of radius 1/2 from each
/// boundary point to the origin, v ≡ 2.
pub fn hedgehog_solution(sign: f64) -> Result<PiecewiseCriticalField> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(format!("sign must be ±1 (got {sign})")));
    }
    let reversed = sign < 0.0;
    let fam = CharacteristicFamily::new(
        if reversed { "hedgehog-" } else { "hedgehog+" },
        (0.0, TAU),
        Arc::new(move |s: f64| {
            Ok(if reversed {
                SeedPoint {
                    x0: s.cos(),
                    y0: s.sin(),
                    theta0: s + PI,
                    v0: -2.0,
                }
            } else {
                SeedPoint {
                    x0: s.cos(),
                    y0: s.sin(),
                    theta0: s,
                    v0: 2.0,
                }
            })
        }),
        Arc::new(|_| Ok(FRAC_PI_2)),
    )
    .with_reversed(reversed);
    Ok(PiecewiseCriticalField {
        domain: "unit disc, radial data".into(),
        families: vec![fam],
        walls: vec![],
    })
}

/// Closed-form hedgehog energy 2πL.
pub fn hedgehog_energy(l: f64) -> f64 {
    TAU * l
}

/// Region III seed curvature: root of (1 − s p)² − √(1 − L²p²) − 1 on [−1/L, 0].
pub fn region3_v0(s: f64, l: f64) -> Result<f64> {
    if !(l > 0.0) || !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("need s >= 0, L > 0 (got s={s}, L={l})")));
    }
    if s == 0.0 {
        return Ok(-1.0 / l);
    }
    let f = move |p: f64| (1.0 - s * p).powi(2) - (1.0 - l * l * p * p).max(0.0).sqrt() - 1.0;
    let lo = -1.0 / l;
    let root = bisect(f, lo, 0.0, 1e-13).map_err(|e| Error::RootFailure {
        region: "III".into(),
        s,
        reason: e.to_string(),
    })?;
    Ok(polish_newton(f, root, lo, 0.0, 3))
}

fn region2_f(s: f64, r: f64, l: f64, p: f64) -> f64 {
    let a = SQRT_2 * ((r * p + 1.0) * (s / r + FRAC_PI_4).sin() - r * p);
    a * a - 1.0 - (1.0 - l * l * p * p).max(0.0).sqrt()
}

/// Region II seed curvature on the arc x_r: root of
/// A² − 1 − √(1 − L²p²), A = √2[(Rp+1) sin(s/R + π/4) − Rp], in (−min(1/R, 1/L), 0).
pub fn region2_v0(s: f64, r: f64, l: f64) -> Result<f64> {
    let end = FRAC_PI_4 * r;
    if !(s >= 0.0 && s <= end) || !(r > 0.0 && l > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need s ∈ [0, πR/4], R, L > 0 (got s={s}, R={r}, L={l})"
        )));
    }
    let q = (1.0 / r).min(1.0 / l);
    let f = move |p: f64| region2_f(s, r, l, p);
    let (flo, fhi) = (f(-q), f(0.0));
    if fhi.abs() < 1e-14 {
        return Ok(0.0);
    }
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::RootFailure {
            region: "II".into(),
            s,
            reason: format!("F(−q) = {flo}, F(0) = {fhi}"),
        });
    }
    let root = bisect(f, -q, 0.0, 1e-13).map_err(|e| Error::RootFailure {
        region: "II".into(),
        s,
        reason: e.to_string(),
    })?;
    Ok(polish_newton(f, root, -q, 0.0, 3))
}

/// Angle on the diagonal wall selected by L v + cos 2θ = 0, θ ∈ [−π/4, 0].
fn wall_angle(l: f64, v: f64) -> f64 {
    -0.5 * (-l * v).clamp(-1.0, 1.0).acos()
}

/// Time for the arc from `seed` to reach the diagonal y = x.
fn diagonal_arrival(seed: &SeedPoint, l: f64) -> f64 {
    if (seed.x0 - seed.y0).abs() <= 1e-14 * seed.x0.abs().max(1.0) {
        return 0.0;
    }
    if seed.v0.abs() < 1e-8 {
        let (s, c) = seed.theta0.sin_cos();
        return ((seed.x0 - seed.y0) / (c + s)).max(0.0);
    }
    ((wall_angle(l, seed.v0) - seed.theta0) / seed.v0).max(0.0)
}

/// The degree −1 octant construction (0 ≤ polar angle ≤ π/4) and its
/// extension to the disc by reflections.
#[derive(Debug, Clone)]
pub struct DegMinusOneSolution {
    pub r: f64,
    pub l: f64,
    pub s0: f64,
    pub region1: CharacteristicFamily,
    pub region2: CharacteristicFamily,
    pub region3: CharacteristicFamily,
    /// Wall y = x in the octant, fed by region III then region II arcs.
    pub walls: Vec<WallCurve>,
}

/// Which octant region a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscRegion {
    I,
    II,
    III,
}

/// Director and divergence at a point, with both traces on the wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscValue {
    pub u: [f64; 2],
    pub v: f64,
    pub region: DiscRegion,
    /// (u₊, u₋) when the point lies on a diagonal.
    pub jump: Option<([f64; 2], [f64; 2])>,
}

fn wall_from_family(fam: &CharacteristicFamily, label: &str) -> WallCurve {
    let fam = fam.clone();
    let (lo, hi) = fam.s_range;
    let nu = [-FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    WallCurve {
        label: label.into(),
        range: (lo, hi),
        multiplicity: 4.0,
        boundary: false,
        curvature: Some(0.0),
        eval: Arc::new(move |s: f64| {
            let p = fam.terminal(s)?;
            let h = 1e-6 * (hi - lo);
            let (a, b) = if s - h < lo {
                (s, s + h)
            } else if s + h > hi {
                (s - h, s)
            } else {
                (s - h, s + h)
            };
            let (pa, pb) = (fam.terminal(a)?, fam.terminal(b)?);
            let speed = (pb.x - pa.x).hypot(pb.y - pa.y) / (b - a);
            let plus = [p.theta.cos(), p.theta.sin()];
            // u₋ = (2ν⊗ν − I)u₊ = (−u₂, −u₁) for ν ∝ (−1, 1).
            let minus = [-plus[1], -plus[0]];
            let mid = 0.5 * (p.x + p.y);
            Ok(WallSample {
                point: [mid, mid],
                speed,
                normal: nu,
                plus,
                minus,
                div_plus: p.v,
                div_minus: -p.v,
            })
        }),
    }
}

/// Assemble the three families of the degree −1 construction.
pub fn build_deg_minus_one(r: f64, l: f64) -> Result<DegMinusOneSolution> {
    if !(r > 0.0 && l > 0.0) {
        return Err(Error::InvalidParameter(format!("R, L > 0 (got R={r}, L={l})")));
    }
    let s0 = (SQRT_2 - 1.0) * r;
    let region1 = CharacteristicFamily::new(
        "I",
        (s0, r),
        Arc::new(move |s: f64| {
            Ok(SeedPoint {
                x0: s,
                y0: 0.0,
                theta0: 0.0,
                v0: -1.0 / r,
            })
        }),
        Arc::new(move |s: f64| Ok(r * ((s + r) / (2.0 * r)).clamp(-1.0, 1.0).acos())),
    )
    .with_multiplicity(8.0);
    let seed3 = move |s: f64| -> Result<SeedPoint> {
        Ok(SeedPoint {
            x0: s,
            y0: 0.0,
            theta0: 0.0,
            v0: region3_v0(s, l)?,
        })
    };
    let region3 = CharacteristicFamily::new(
        "III",
        (0.0, s0),
        Arc::new(seed3),
        Arc::new(move |s: f64| Ok(diagonal_arrival(&seed3(s)?, l))),
    )
    .with_multiplicity(8.0);
    let seed2 = move |s: f64| -> Result<SeedPoint> {
        Ok(SeedPoint {
            x0: SQRT_2 * r - r * (s / r).cos(),
            y0: r * (s / r).sin(),
            theta0: -s / r,
            v0: region2_v0(s, r, l)?,
        })
    };
    let region2 = CharacteristicFamily::new(
        "II",
        (0.0, FRAC_PI_4 * r),
        Arc::new(seed2),
        Arc::new(move |s: f64| Ok(diagonal_arrival(&seed2(s)?, l))),
    )
    .with_multiplicity(8.0);
    let walls = vec![
        wall_from_family(&region3, "diagonal/III"),
        wall_from_family(&region2, "diagonal/II"),
    ];
    Ok(DegMinusOneSolution {
        r,
        l,
        s0,
        region1,
        region2,
        region3,
        walls,
    })
}

impl DegMinusOneSolution {
    pub fn as_piecewise(&self) -> PiecewiseCriticalField {
        PiecewiseCriticalField {
            domain: format!("disc R={}, degree −1 data", self.r),
            families: vec![self.region1.clone(), self.region2.clone(), self.region3.clone()],
            walls: self.walls.clone(),
        }
    }

    /// Evaluate in the closed octant 0 ≤ y ≤ x.
    fn octant_eval(&self, x: f64, y: f64) -> Result<(f64, f64, DiscRegion)> {
        let r = self.r;
        let cx = SQRT_2 * r;
        if (x - cx).powi(2) + y * y <= r * r * (1.0 + 1e-14) {
            let th = -(y / r).clamp(-1.0, 1.0).asin();
            return Ok((th, -1.0 / r, DiscRegion::I));
        }
        if let Ok((s, t)) = invert_family(&self.region3, x, y, None) {
            let p = self.region3.point(s, t)?;
            return Ok((p.theta, p.v, DiscRegion::III));
        }
        let (s, t) = invert_family(&self.region2, x, y, None)?;
        let p = self.region2.point(s, t)?;
        Ok((p.theta, p.v, DiscRegion::II))
    }
}

/// u and div u anywhere in the disc, via the octant and the reflection rules
/// u(x,−y) = (u₁, −u₂), u(−x,y) = (−u₁, u₂), u(p) = −D u(D p) with D the swap.
pub fn deg_minus_one_field_eval(sol: &DegMinusOneSolution, x: f64, y: f64) -> Result<DiscValue> {
    if !(x * x + y * y < sol.r * sol.r) {
        return Err(Error::InvalidParameter(format!(
            "point ({x}, {y}) outside the open disc of radius {}",
            sol.r
        )));
    }
    let fy = y < 0.0;
    let (x1, y1) = (x, y.abs());
    let fx = x1 < 0.0;
    let (x2, y2) = (x1.abs(), y1);
    let fd = y2 > x2;
    let (x3, y3) = if fd { (y2, x2) } else { (x2, y2) };
    let on_wall = (x3 - y3).abs() <= 1e-12 * sol.r;
    let (th, v, region) = sol.octant_eval(x3, y3)?;
    let back = |u: [f64; 2], v: f64, diag: bool| {
        let (mut u, mut v) = (u, v);
        if diag {
            u = [-u[1], -u[0]];
            v = -v;
        }
        if fx {
            u = [-u[0], u[1]];
        }
        if fy {
            u = [u[0], -u[1]];
        }
        (u, v)
    };
    let u_oct = [th.cos(), th.sin()];
    let (u, vv) = back(u_oct, v, fd);
    let jump = if on_wall {
        let (a, _) = back(u_oct, v, false);
        let (b, _) = back(u_oct, v, true);
        Some((a, b))
    } else {
        None
    };
    Ok(DiscValue { u, v: vv, region, jump })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hedgehog_is_unit() {
        for k in 0..50 {
            let r = k as f64 / 49.0;
            let th = 0.3 * k as f64;
            for sign in [1.0, -1.0] {
                let u = hedgehog_field(sign, r * th.cos(), r * th.sin());
                assert!((u[0].hypot(u[1]) - 1.0).abs() < 1e-14);
            }
        }
        let u = hedgehog_field(1.0, 1.0, 0.0);
        assert!((u[0] - 1.0).abs() < 1e-15 && u[1].abs() < 1e-15);
    }

    #[test]
    fn hedgehog_family_matches_closed_form() {
        for sign in [1.0, -1.0] {
            let f = &hedgehog_solution(sign).unwrap().families[0];
            for (s, t) in [(0.3, 0.4), (2.0, 1.2), (5.0, 0.1)] {
                let p = f.point(s, t).unwrap();
                let u = hedgehog_field(sign, p.x, p.y);
                assert!((u[0] - p.theta.cos()).abs() < 1e-12, "sign {sign}");
                assert!((u[1] - p.theta.sin()).abs() < 1e-12);
                assert_eq!(p.v, 2.0);
            }
            let end = f.terminal(1.0).unwrap();
            assert!(end.x.hypot(end.y) < 1e-14);
        }
    }

    #[test]
    fn region3_limits() {
        let l = 0.5;
        let v = region3_v0(1e-4, l).unwrap();
        assert!((v + 1.0 / l).abs() < 1e-3);
        let r = 0.6;
        let s0 = (SQRT_2 - 1.0) * r;
        let v = region3_v0(s0, l).unwrap();
        assert!(v > -1.0 / r);
        assert!(1.0 - s0 * v < SQRT_2);
    }

    #[test]
    fn region3_against_scan() {
        let (s, l) = (0.1, 0.5);
        let v = region3_v0(s, l).unwrap();
        let f = |p: f64| (1.0 - s * p).powi(2) - (1.0 - l * l * p * p).sqrt() - 1.0;
        assert!(f(v).abs() < 1e-12);
        let n = 1_000_000;
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=n {
            let p = -1.0 / l + (1.0 / l) * k as f64 / n as f64;
            if f(p).abs() < best.0 {
                best = (f(p).abs(), p);
            }
        }
        assert!((best.1 - v).abs() < 2.0 / (l * n as f64));
    }

    #[test]
    fn region2_endpoint_signs() {
        let (r, l) = (0.6, 0.5);
        for k in 1..20 {
            let s = FRAC_PI_4 * r * k as f64 / 20.0;
            let f0 = region2_f(s, r, l, 0.0);
            assert!((f0 + 2.0 * (s / r + FRAC_PI_4).cos().powi(2)).abs() < 1e-14);
            assert!(f0 < 0.0);
        }
        let v = region2_v0(0.2, r, l).unwrap();
        assert!(region2_f(0.2, r, l, v).abs() < 1e-12);
    }

    #[test]
    fn region_boundary_continuity() {
        let (r, l) = (0.6, 0.5);
        let s0 = (SQRT_2 - 1.0) * r;
        let v2 = region2_v0(1e-9, r, l).unwrap();
        let v3 = region3_v0(s0, l).unwrap();
        assert!((v2 - v3).abs() < 1e-7);
    }
}
