use std::f64::consts::{FRAC_PI_4, PI, SQRT_2, TAU};

use nematic_walls::characteristics::check_foliation;
use nematic_walls::disc::*;
use nematic_walls::energy::{criticality_residuals, eval_E0_piecewise};
use nematic_walls::Params;

fn params(l: f64, r: f64) -> Params {
    Params::new(l, 0.01, 1.0, 1.0, r, 0.0).unwrap()
}

#[test]
fn tangential_has_zero_energy() {
    let f = tangential_solution(0.6).unwrap();
    let e = eval_E0_piecewise(&f, &params(0.5, 0.6)).unwrap();
    assert_eq!(e.total, 0.0);
    let c = criticality_residuals(&f, &params(0.5, 0.6)).unwrap();
    assert!(c.el5 < 1e-12);
    let p = f.families[0].point(1.0, 0.3).unwrap();
    assert_eq!(p.v, 0.0);
    assert!((p.x * p.theta.cos() + p.y * p.theta.sin()).abs() < 1e-14);
}

#[test]
fn hedgehog_energy_is_two_pi_l() {
    for sign in [1.0, -1.0] {
        let f = hedgehog_solution(sign).unwrap();
        let e = eval_E0_piecewise(&f, &params(0.7, 1.0)).unwrap();
        assert!((e.total - TAU * 0.7).abs() < 1e-9, "sign {sign}: {}", e.total);
        assert!((hedgehog_energy(0.7) - e.total).abs() < 1e-9);
    }
}

#[test]
fn deg_minus_one_natural_bc_and_foliation() {
    let sol = build_deg_minus_one(0.6, 0.5).unwrap();
    let c = criticality_residuals(&sol.as_piecewise(), &params(0.5, 0.6)).unwrap();
    println!("{c:?}");
    assert!(c.wall_samples >= 256);
    assert!(c.el4 < 1e-8, "el4 {}", c.el4);
    assert!(c.el5 < 1e-6, "el5 {}", c.el5);
    for fam in [&sol.region1, &sol.region2, &sol.region3] {
        let rep = check_foliation(fam, 32, 32).unwrap();
        assert!(rep.sign_consistent && rep.crossings == 0, "{}: {rep:?}", fam.label);
    }
}

#[test]
fn deg_minus_one_geometry() {
    let (r, l) = (0.6, 0.5);
    let sol = build_deg_minus_one(r, l).unwrap();
    assert!((sol.s0 - (SQRT_2 - 1.0) * r).abs() < 1e-15);
    // the region I arc with foot (√2−1)R ends at the boundary on the diagonal
    let end = sol.region1.terminal(sol.s0).unwrap();
    assert!((end.x - r / SQRT_2).abs() < 1e-12 && (end.y - r / SQRT_2).abs() < 1e-12);
    let foot = sol.region1.point(sol.s0, 0.0).unwrap();
    assert!(foot.y.abs() < 1e-15 && (foot.x - (SQRT_2 - 1.0) * r).abs() < 1e-15);
    let e = sol.region1.terminal(r).unwrap();
    assert!((e.x.hypot(e.y) - r).abs() < 1e-12);
    // region II starts where region I's terminal arc sits
    let seed = sol.region2.seed(1e-9).unwrap();
    assert!((seed.x0 - sol.s0).abs() < 1e-8);
    for k in 0..=40 {
        let s = sol.s0 * k as f64 / 40.0;
        let v = sol.region3.seed(s.max(1e-12)).unwrap().v0;
        assert!((-1.0 / l..0.0).contains(&v));
    }
}

#[test]
fn deg_minus_one_v0_increasing() {
    let (r, l) = (0.6, 0.5);
    let s0 = (SQRT_2 - 1.0) * r;
    let mut prev = f64::NEG_INFINITY;
    for k in 1..=200 {
        let v = region3_v0(s0 * k as f64 / 200.0, l).unwrap();
        assert!(v > prev);
        prev = v;
    }
    let mut prev = f64::NEG_INFINITY;
    for k in 1..200 {
        let v = region2_v0(FRAC_PI_4 * r * k as f64 / 200.0, r, l).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn deg_minus_one_field_eval_rules() {
    let r = 0.6;
    let sol = build_deg_minus_one(r, 0.5).unwrap();
    for x in [-0.5, -0.1, 0.05, 0.3, 0.55] {
        let val = deg_minus_one_field_eval(&sol, x, 0.0).unwrap();
        assert!((val.u[0].abs() - 1.0).abs() < 1e-9 && val.u[1].abs() < 1e-9, "{x}: {val:?}");
    }
    for k in 0..64 {
        let a = TAU * (k as f64 + 0.37) / 64.0;
        let rr = r * (1.0 - 1e-10);
        let val = deg_minus_one_field_eval(&sol, rr * a.cos(), rr * a.sin()).unwrap();
        assert!((val.u[0] - a.cos()).abs() < 1e-6, "angle {a}: {val:?}");
        assert!((val.u[1] + a.sin()).abs() < 1e-6, "angle {a}: {val:?}");
    }
    for k in 0..200 {
        let a = FRAC_PI_4 * (k as f64 + 0.5) / 200.0;
        let rr = r * ((k * 37 % 199) as f64 + 0.5) / 200.0;
        let val = deg_minus_one_field_eval(&sol, rr * a.cos(), rr * a.sin()).unwrap();
        let th = val.u[1].atan2(val.u[0]);
        assert!((-FRAC_PI_4 - 1e-9..=1e-9).contains(&th), "{th}");
        assert!((val.u[0].hypot(val.u[1]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn deg_minus_one_symmetry() {
    let sol = build_deg_minus_one(0.6, 0.5).unwrap();
    let (x, y) = (0.31, 0.12);
    let base = deg_minus_one_field_eval(&sol, x, y).unwrap();
    let my = deg_minus_one_field_eval(&sol, x, -y).unwrap();
    assert!((my.u[0] - base.u[0]).abs() < 1e-12 && (my.u[1] + base.u[1]).abs() < 1e-12);
    let mx = deg_minus_one_field_eval(&sol, -x, y).unwrap();
    assert!((mx.u[0] + base.u[0]).abs() < 1e-12 && (mx.u[1] - base.u[1]).abs() < 1e-12);
    let d = deg_minus_one_field_eval(&sol, y, x).unwrap();
    assert!((d.u[0] + base.u[1]).abs() < 1e-12 && (d.u[1] + base.u[0]).abs() < 1e-12);
    assert!((d.v + base.v).abs() < 1e-12);
    let w = deg_minus_one_field_eval(&sol, 0.2, 0.2).unwrap();
    let (p, m) = w.jump.unwrap();
    let nu = [-1.0 / SQRT_2, 1.0 / SQRT_2];
    assert!(((p[0] - m[0]) * nu[0] + (p[1] - m[1]) * nu[1]).abs() < 1e-12);
}

#[test]
fn deg_minus_one_energy_increases_with_l() {
    let r = 0.6;
    let mut prev = 0.0;
    for k in 0..=6 {
        let l = 0.1 + 0.1 * k as f64;
        let sol = build_deg_minus_one(r, l).unwrap();
        let e = eval_E0_piecewise(&sol.as_piecewise(), &params(l, r)).unwrap();
        println!("L={l:.1} E0={:.10} bulk={:.10} wall={:.10}", e.total, e.bulk_div, e.wall_interior);
        assert!(e.total > prev);
        prev = e.total;
    }
    let _ = PI;
}
