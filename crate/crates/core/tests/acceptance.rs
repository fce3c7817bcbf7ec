//! One PASS/FAIL line per acceptance criterion. Run in release-like mode
//! (the test profile is optimized); budgets are wall-clock seconds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nematic_walls::annulus::{
    a_squared, annulus_radial_minimizer, rho_squared_half, scan_g, small_l_interior_bound, solve_interior_wall,
    AnnulusRegime,
};
use nematic_walls::characteristics::check_foliation;
use nematic_walls::cli::{Command, RunConfig};
use nematic_walls::crosstie::{
    build_crosstie, crossing_from_rows, crosstie_sweep, l_over_h_from_ttilde, remark_crosstie_energy, solve_Ttilde,
    tdln_residual,
};
use nematic_walls::disc::{build_deg_minus_one, region2_v0, region3_v0, tangential_solution};
use nematic_walls::energy::{criticality_residuals, eval_E0_piecewise, nodal_weights, eval_E_eps, QuadSpec};
use nematic_walls::field::{sample_analytic, Field2D};
use nematic_walls::gradflow::{
    diagonal_jump_offsets, perturb, random_field, rhs, run_continuation, run_to_equilibrium, BcKind,
    BoundaryCondition, FlowOptions, FlowState,
};
use nematic_walls::grid::Grid2D;
use nematic_walls::rect1d::{epsilon_ladder, min_energy_1d};
use nematic_walls::Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run(n: usize, title: &str, budget: f64, f: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = t0.elapsed().as_secs_f64();
    let out = match out {
        Ok(d) if secs > budget => Err(format!("{d}; took {secs:.1} s, budget {budget} s")),
        o => o,
    };
    let (tag, detail) = match &out {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} {n:>2} {title} [{secs:.2} s] {detail}");
    out.is_ok()
}

fn params(l: f64, eps: f64, r: f64) -> Params {
    Params {
        l,
        eps,
        r,
        ..Default::default()
    }
}

fn hedgehog() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for l in [0.5, 1.0, 2.0] {
        let mut cfg = RunConfig::for_command(Command::DiscHedgehog);
        cfg.l = l;
        cfg.nx = 8;
        cfg.ny = 16;
        cfg.out = dir.path().join(format!("L{l}"));
        let out = cfg.dispatch().map_err(|e| e.to_string())?;
        let closed = out.summary["closed_form"].as_f64().unwrap();
        let quad = out.summary["quadrature"]["total"].as_f64().unwrap();
        ensure(closed == TAU * l, format!("closed form {closed} at L={l}"))?;
        worst = worst.max((quad - closed).abs());
    }
    ensure(worst < 1e-8, format!("quadrature error {worst:.2e}"))?;
    Ok(format!("closed form exact, quadrature error {worst:.1e}"))
}

fn tangential() -> Outcome {
    let r = 1.0;
    let e0 = eval_E0_piecewise(&tangential_solution(r).unwrap(), &params(1.0, 0.01, r)).unwrap();
    ensure(e0.total == 0.0, format!("E0 = {}", e0.total))?;
    let g = Grid2D::disc(r, 128, 256).unwrap();
    let bc = BoundaryCondition::new(BcKind::DiscTangential, &g).unwrap();
    let bound = PI * (r / g.x0).ln();
    let mut ratios = Vec::new();
    for eps in [0.02, 0.01] {
        let p = params(1.0, eps, r);
        let mut init = sample_analytic(&g, |x, y| {
            let q = x.hypot(y);
            [-y / q, x / q]
        })
        .unwrap();
        perturb(&mut init, 0.1, 9);
        let opts = FlowOptions::adaptive();
        let mut s = FlowState::new(init, bc.clone(), &p, &opts).unwrap();
        run_to_equilibrium(&mut s, &p, &opts, 1e-4, 2.0).unwrap();
        let ratio = s.energy().total / eps;
        ensure(ratio <= 1.01 * bound, format!("E/ε = {ratio:.4} above π ln(R/r_in) = {bound:.4}"))?;
        ratios.push(ratio);
    }
    Ok(format!("E0 = 0, E_ε/ε = {:.3} (ε=0.02), {:.3} (ε=0.01), bound {bound:.3}", ratios[0], ratios[1]))
}

fn one_d_minimum() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let x = 0.05 + 0.1 * k as f64;
        let e = min_energy_1d(x, 0.0).unwrap();
        worst = worst.max((e - (x - x * x * x / 12.0)).abs());
    }
    ensure(worst < 1e-10, format!("L/H < 2 error {worst:.2e}"))?;
    let mut worst_step: f64 = 0.0;
    for x in [2.01, 2.5, 3.0, 5.0, 10.0] {
        worst_step = worst_step.max((min_energy_1d(x, 0.0).unwrap() - 4.0 / 3.0).abs());
    }
    ensure(worst_step < 1e-12, format!("L/H > 2 error {worst_step:.2e}"))?;
    let tie = min_energy_1d(2.0, 0.0).unwrap();
    let branch: f64 = 2.0 - 8.0 / 12.0;
    ensure(
        (tie - 4.0 / 3.0).abs() < 1e-12 && (branch - 4.0 / 3.0).abs() < 1e-12,
        format!("tie at 2: {tie}"),
    )?;
    Ok(format!("errors {worst:.1e} (L/H<2), {worst_step:.1e} (L/H>2), tie at 2"))
}

fn gamma_limit_1d() -> Outcome {
    let e0 = min_energy_1d(1.0, 0.0).unwrap();
    let rows = epsilon_ladder(1.0, 1.0, 0.0, &[1e-2, 5e-3, 2.5e-3], 40.0).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap).collect();
    let detail = format!(
        "gaps {:.3e}, {:.3e}, {:.3e}; final relative gap {:.3}%",
        gaps[0],
        gaps[1],
        gaps[2],
        100.0 * gaps[2] / e0
    );
    ensure(gaps.windows(2).all(|w| w[1] < w[0]) && gaps[2] > 0.0, format!("not shrinking: {detail}"))?;
    ensure(gaps[2] / e0 < 0.01, detail.clone())?;
    Ok(detail)
}

fn remark() -> Outcome {
    let e = remark_crosstie_energy(10.0).unwrap();
    ensure((e - 4.0 / 3.0).abs() < 1e-8, format!("E = {e}"))?;
    Ok(format!("E = {e:.12}"))
}

fn period_equation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut res, mut back): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let x: f64 = rng.gen_range(0.1..5.0);
        let tt = solve_Ttilde(x).unwrap();
        res = res.max(tdln_residual(x, tt).abs());
        back = back.max((l_over_h_from_ttilde(tt) - x).abs() / x.max(1.0));
    }
    ensure(res < 1e-12, format!("residual {res:.2e}"))?;
    ensure(back < 1e-10, format!("closed form mismatch {back:.2e}"))?;
    let (a, b) = (solve_Ttilde(1.0).unwrap() / 2.0, solve_Ttilde(3.0).unwrap() / 2.0);
    ensure((a - 0.3).abs() <= 0.02 && (b - 0.25).abs() <= 0.02, format!("T̃/2 = {a}, {b}"))?;
    Ok(format!("residual {res:.1e}, closed form {back:.1e}, T̃(1)/2 = {a:.4}, T̃(3)/2 = {b:.4}"))
}

fn crosstie_invariants() -> Outcome {
    let mut worst = [0.0f64; 2];
    for x in [1.0, 1.5, 2.0] {
        let c = build_crosstie(x, 1.0).unwrap().checks(512).unwrap();
        ensure(c.tangency < 1e-9, format!("L/H={x}: tangency {:.2e}", c.tangency))?;
        ensure(c.wall_residual < 1e-8, format!("L/H={x}: wall residual {:.2e}", c.wall_residual))?;
        ensure(c.theta2_monotone, format!("L/H={x}: θ₂* not monotone"))?;
        ensure(
            (FRAC_PI_4..=FRAC_PI_2).contains(&c.alpha_t1),
            format!("L/H={x}: α t₁* = {}", c.alpha_t1),
        )?;
        ensure(c.foliation_ok == [true; 3], format!("L/H={x}: foliation {:?}", c.foliation_ok))?;
        worst[0] = worst[0].max(c.tangency);
        worst[1] = worst[1].max(c.wall_residual);
    }
    Ok(format!("tangency {:.1e}, wall residual {:.1e}", worst[0], worst[1]))
}

fn crossing() -> Outcome {
    let quad = QuadSpec::default();
    let rows = crosstie_sweep(0.5, 3.0, 0.01, quad).unwrap();
    let c = crossing_from_rows(&rows, 1e-6, quad).unwrap();
    let (l0, l1) = (c.l0.unwrap_or(f64::NAN), c.l1.unwrap_or(f64::NAN));
    let inside = rows
        .iter()
        .filter(|r| r.l_over_h > l0 && r.l_over_h < l1)
        .all(|r| r.gap < 0.0);
    let detail = format!("L0 = {l0:.6}, L1 = {l1:.6}, crossings {:?}", c.all);
    ensure(inside, format!("cross-tie not below 1D inside: {detail}"))?;
    ensure((l0 - 1.27).abs() <= 0.05, format!("L0 outside 1.27 ± 0.05: {detail}"))?;
    ensure((l1 - 2.14).abs() <= 0.05, format!("L1 outside 2.14 ± 0.05: {detail}"))?;
    Ok(detail)
}

fn deg_minus_one() -> Outcome {
    let (r, l) = (0.6, 0.5);
    let sol = build_deg_minus_one(r, l).unwrap();
    for k in 0..=20 {
        let s = sol.s0 + (r - sol.s0) * k as f64 / 20.0;
        let v = sol.region1.seed(s).unwrap().v0;
        ensure(v == -1.0 / r, format!("region I v0 = {v} at s = {s}"))?;
    }
    let lim = region3_v0(1e-4, l).unwrap();
    ensure((lim + 1.0 / l).abs() < 1e-3, format!("region III v0(1e-4) = {lim}"))?;
    let c = criticality_residuals(&sol.as_piecewise(), &params(l, 0.01, r)).unwrap();
    ensure(c.el4 < 1e-8, format!("el4 {:.2e}", c.el4))?;
    let inc = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        (1..200)
            .map(|k| f(lo + (hi - lo) * k as f64 / 200.0))
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1] > w[0])
    };
    ensure(inc(&|s| region3_v0(s, l).unwrap(), 0.0, sol.s0), "region III v0 not monotone")?;
    ensure(inc(&|s| region2_v0(s, r, l).unwrap(), 0.0, FRAC_PI_4 * r), "region II v0 not monotone")?;
    for fam in [&sol.region1, &sol.region2, &sol.region3] {
        let f = check_foliation(fam, 32, 32).unwrap();
        ensure(f.sign_consistent && f.crossings == 0, format!("region {} foliation {f:?}", fam.label))?;
    }
    let mut es = Vec::new();
    for k in 0..=6 {
        let lk = 0.1 + 0.1 * k as f64;
        let s = build_deg_minus_one(r, lk).unwrap();
        es.push(eval_E0_piecewise(&s.as_piecewise(), &params(lk, 0.01, r)).unwrap().total);
    }
    ensure(es.windows(2).all(|w| w[1] > w[0]), format!("E0(L) not increasing: {es:?}"))?;
    Ok(format!(
        "el4 {:.1e}, v0(1e-4) + 1/L = {:.1e}, E0 {:.4} → {:.4} on L ∈ [0.1, 0.7]",
        c.el4,
        lim + 1.0 / l,
        es[0],
        es[6]
    ))
}

fn annulus() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [1.5, 2.0, 3.0, 5.0] {
        let z = rho_squared_half(r);
        worst = worst.max((z - 2.0 * r * r / (r * r + 1.0)).abs());
        worst = worst.max((a_squared(z, r) - 0.25).abs());
    }
    ensure(worst < 1e-12, format!("a = 1/2 wall: {worst:.2e}"))?;
    let r = 2.0;
    let l = 0.9 * small_l_interior_bound(r);
    let inner = solve_interior_wall(r, l).unwrap().ok_or("no interior wall")?;
    ensure(
        inner.energy.total < 8.0 * PI / 3.0,
        format!("interior wall energy {}", inner.energy.total),
    )?;
    let scan = scan_g(r, 10.0).unwrap();
    ensure(scan.roots.is_empty(), format!("roots at L=10: {:?}", scan.roots))?;
    let big = annulus_radial_minimizer(r, 10.0).unwrap();
    ensure(
        big.regime() == AnnulusRegime::InnerBoundaryWall && (big.energy.total - 8.0 * PI / 3.0).abs() < 1e-12,
        format!("L=10: {big:?}"),
    )?;
    Ok(format!(
        "interior wall E = {:.5} < 8π/3 at L = {l:.4}; L = 10 boundary wall E = {:.10}",
        inner.energy.total, big.energy.total
    ))
}

fn fd_error(field: &Field2D, p: &Params, bc: &BoundaryCondition, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = field.grid.len();
    let free = bc.free_mask(n);
    let w: Vec<[f64; 2]> = (0..n)
        .map(|k| {
            if free[k] {
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
            } else {
                [0.0, 0.0]
            }
        })
        .collect();
    let g = rhs(field, p, bc);
    let m = nodal_weights(&field.grid);
    let analytic: f64 = -(0..n)
        .map(|k| m[k] * (g.values[k][0] * w[k][0] + g.values[k][1] * w[k][1]))
        .sum::<f64>();
    let e = |s: f64| {
        let v = field
            .values
            .iter()
            .zip(&w)
            .map(|(a, d)| [a[0] + s * d[0], a[1] + s * d[1]])
            .collect();
        eval_E_eps(&Field2D::new(field.grid.clone(), v).unwrap(), p).unwrap().total
    };
    let h = 1e-6;
    let fd = (e(h) - e(-h)) / (2.0 * h);
    (fd - analytic).abs() / fd.abs()
}

fn gradient_flow() -> Outcome {
    let opts = FlowOptions {
        dt_max_factor: 16.0,
        growth: 1.2,
        ..Default::default()
    };

    let mut fd: f64 = 0.0;
    let g = Grid2D::rectangle(0.5, 1.0, 24, 48, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.3 }, &g).unwrap();
    let mut f = random_field(&g, 1);
    bc.apply(&mut f.values);
    fd = fd.max(fd_error(&f, &params(0.5, 0.01, 1.0), &bc, 2));
    let g = Grid2D::disc(0.6, 24, 48).unwrap();
    let bc = BoundaryCondition::new(BcKind::DiscDegMinusOne, &g).unwrap();
    let mut f = random_field(&g, 3);
    bc.apply(&mut f.values);
    fd = fd.max(fd_error(&f, &params(0.5, 0.01, 0.6), &bc, 4));
    ensure(fd < 1e-5, format!("FD relative error {fd:.2e}"))?;

    let p = Params {
        l: 0.5,
        eps: 0.005,
        h: 1.0,
        t: 0.02,
        ..Default::default()
    };
    let g = Grid2D::rectangle(p.t, p.h, 10, 400, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &g).unwrap();
    let (s, _) = run_continuation(random_field(&g, 1), &bc, &p, &opts, 0.08, 1e-3, 1600.0).unwrap();
    let monotone = |s: &FlowState| {
        s.energy_trace
            .windows(2)
            .all(|w| w[1].1.total <= w[0].1.total + 1e-12 * w[0].1.total.abs().max(1.0))
    };
    ensure(monotone(&s), "rectangle energy trace not monotone")?;
    let per_length = s.energy().total / (2.0 * p.t);
    let target = min_energy_1d(0.5, 0.0).unwrap();
    let rel = (per_length - target) / target;
    ensure(rel.abs() < 0.05, format!("rectangle E/2T = {per_length} vs {target}"))?;

    let (r, l) = (0.6, 0.5);
    let p = params(l, 0.005, r);
    let g = Grid2D::disc(r, 256, 256).unwrap();
    let bc = BoundaryCondition::new(BcKind::DiscDegMinusOne, &g).unwrap();
    let mut init = sample_analytic(&g, |x, y| {
        let q = x.hypot(y);
        [x / q, -y / q]
    })
    .unwrap();
    perturb(&mut init, 0.3, 11);
    let (s, _) = run_continuation(init, &bc, &p, &opts, 0.04, 1e-3, 1600.0).unwrap();
    ensure(monotone(&s), "disc energy trace not monotone")?;
    let js = diagonal_jump_offsets(&s.field, 0.1 * r, 0.9 * r);
    let worst = js.iter().map(|j| j.offset_cells()).fold(0.0, f64::max);
    ensure(!js.is_empty() && worst <= 1.0, format!("diagonal wall offset {worst:.3} cells"))?;

    Ok(format!(
        "FD {fd:.1e}; rectangle gap {:+.2}%; degree −1 wall within {worst:.2} cells of the diagonals ({} samples)",
        100.0 * rel,
        js.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let results = [
        run(1, "hedgehog energy", 1.0, hedgehog),
        run(2, "tangential zero energy", 60.0, tangential),
        run(3, "1D minimum", 1.0, one_d_minimum),
        run(4, "1D Γ-limit convergence", 60.0, gamma_limit_1d),
        run(5, "remark cross-tie", 1.0, remark),
        run(6, "period equation", 1.0, period_equation),
        run(7, "cross-tie invariants", 10.0, crosstie_invariants),
        run(8, "energy crossing", 300.0, crossing),
        run(9, "degree −1 construction", 30.0, deg_minus_one),
        run(10, "annulus", 1.0, annulus),
        run(11, "gradient flow", 1800.0, gradient_flow),
    ];
    let failed: Vec<usize> = (1..=11).filter(|k| !results[k - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
