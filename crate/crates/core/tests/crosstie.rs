use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use nematic_walls::crosstie::*;
use nematic_walls::energy::{criticality_residuals, QuadSpec};
use nematic_walls::Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn period_equation_residual_and_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let r: f64 = rng.gen_range(0.1..5.0);
        let tt = solve_Ttilde(r).unwrap();
        assert!(tt > 0.0 && tt < 1.0);
        assert!(tdln_residual(r, tt).abs() < 1e-12, "L/H={r}");
        assert!((l_over_h_from_ttilde(tt) - r).abs() < 1e-10 * r.max(1.0), "L/H={r}");
    }
}

#[test]
fn period_matches_figure_captions() {
    assert!((solve_Ttilde(1.0).unwrap() / 2.0 - 0.3).abs() < 0.02);
    assert!((solve_Ttilde(3.0).unwrap() / 2.0 - 0.25).abs() < 0.02);
}

#[test]
fn construction_invariants() {
    for r in [1.0, 1.5, 2.0] {
        let sol = build_crosstie(r, 1.0).unwrap();
        let c = sol.checks(512).unwrap();
        println!("L/H={r}: {c:?}");
        assert!(c.tangency < 1e-9);
        assert!(c.wall_residual < 1e-8);
        assert!(c.theta2_monotone);
        assert!(c.alpha_t1 >= FRAC_PI_4 && c.alpha_t1 <= FRAC_PI_2);
        assert!(c.gamma_theta_jump < 1e-8);
        assert!(c.gamma_div_jump > 0.0);
        assert_eq!(c.foliation_ok, [true; 3]);
        assert!(c.area_defect.abs() < 1e-8, "area defect {}", c.area_defect);
        let p = Params { l: r, ..Default::default() };
        let res = criticality_residuals(&sol.as_piecewise(), &p).unwrap();
        assert!(res.el4 < 1e-8, "{res:?}");
    }
}

#[test]
fn region1_radius_at_least_h() {
    let sol = build_crosstie(1.3, 0.7).unwrap();
    for k in 0..=100 {
        let s = sol.t * k as f64 / 100.0;
        let v = sol.region1.seed(s).unwrap().v0;
        assert!(v <= 1.0 / 0.7 + 1e-15);
        let end = sol.region1.terminal(s).unwrap();
        assert!((end.x - sol.t).abs() < 1e-9 && end.y.abs() < 1e-9, "s={s}: {end:?}");
    }
    let right = sol.region1.point(sol.t, 0.3).unwrap();
    assert!((right.x - sol.t).abs() < 1e-15 && right.v == 0.0);
}

#[test]
fn region3_terminal_arrival() {
    let sol = build_crosstie(1.5, 1.0).unwrap();
    for k in 1..=20 {
        let s = sol.t * k as f64 / 20.0;
        let p = sol.region3.terminal(s).unwrap();
        assert!(p.x.abs() < 1e-12 && (p.y - s).abs() < 1e-12);
    }
    let q = sol.region2.terminal(sol.t1_star).unwrap();
    assert!(q.x.abs() < 1e-9 && (q.y - sol.t).abs() < 1e-9, "{q:?}");
}

#[test]
fn energy_is_scale_invariant() {
    let q = QuadSpec::default();
    let a = crosstie_energy_per_length(&build_crosstie(1.0, 0.5).unwrap(), q).unwrap();
    let b = crosstie_energy_per_length(&build_crosstie(2.0, 1.0).unwrap(), q).unwrap();
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn energy_converges_under_refinement() {
    let sol = build_crosstie(1.7, 1.0).unwrap();
    let a = crosstie_energy_per_length(&sol, QuadSpec::default()).unwrap();
    let fine = QuadSpec {
        s_panels: 128,
        t_panels: 128,
        wall_panels: 128,
        ..Default::default()
    };
    let b = crosstie_energy_per_length(&sol, fine).unwrap();
    println!("{a} {b}");
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn one_dimensional_wins_at_small_ratio() {
    let rows = crosstie_sweep(0.5, 0.5, 0.1, QuadSpec::default()).unwrap();
    assert!(rows[0].gap > 0.0);
    let rows = crosstie_sweep(1.7, 1.7, 0.1, QuadSpec::default()).unwrap();
    assert!(rows[0].gap < 0.0);
}

#[test]
fn remark_map_energy() {
    let t0 = Instant::now();
    let e = remark_crosstie_energy(10.0).unwrap();
    assert!((e - 4.0 / 3.0).abs() < 1e-8, "{e}");
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    let u = remark_crosstie_map(0.0, 0.25);
    assert!((u[0] - 1.0).abs() < 1e-15);
    // jump angle π/4 across y = 0 inside the strip
    let (p, m) = (remark_crosstie_map(0.2, 1e-9), remark_crosstie_map(0.2, -1e-9));
    let ang = (p[0] * m[0] + p[1] * m[1]).acos();
    assert!((ang - FRAC_PI_2).abs() < 1e-12 || (ang / 2.0 - FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn remark_map_normal_continuity() {
    for k in 0..200 {
        let y = -5.0 + 10.0 * (k as f64 + 0.5) / 200.0;
        let (a, b) = (remark_crosstie_map(0.5 - 1e-12, y), remark_crosstie_map(0.5 + 1e-12, y));
        assert!((a[0] - b[0]).abs() < 1e-9);
        let x = -0.5 + (k as f64 + 0.5) / 200.0;
        let (a, b) = (remark_crosstie_map(x, 1e-12), remark_crosstie_map(x, -1e-12));
        assert!((a[1] - b[1]).abs() < 1e-9);
        for ang in [FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4, 7.0 * FRAC_PI_4] {
            let r = 0.3 * (k as f64 + 0.5) / 200.0;
            let n = [-ang.sin(), ang.cos()];
            let (a, b) = (
                remark_crosstie_map(r * (ang - 1e-9).cos(), r * (ang - 1e-9).sin()),
                remark_crosstie_map(r * (ang + 1e-9).cos(), r * (ang + 1e-9).sin()),
            );
            assert!(((a[0] - b[0]) * n[0] + (a[1] - b[1]) * n[1]).abs() < 1e-8);
        }
    }
}
