use std::f64::consts::PI;

use nematic_walls::crosstie::{build_crosstie, crosstie_energy_per_length};
use nematic_walls::energy::{eval_E_eps, nodal_weights, QuadSpec};
use nematic_walls::field::{sample_analytic, Field2D};
use nematic_walls::gradflow::*;
use nematic_walls::grid::Grid2D;
use nematic_walls::rect1d::min_energy_1d;
use nematic_walls::{Error, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(l: f64, eps: f64) -> Params {
    Params {
        l,
        eps,
        ..Default::default()
    }
}

fn no_bc(grid: &Grid2D) -> BoundaryCondition {
    BoundaryCondition {
        kind: BcKind::RectStrip { a: 0.0 },
        periodic_x: grid.periodic_x,
        fixed: vec![],
        values: vec![],
    }
}

fn fd_check(field: &Field2D, p: &Params, bc: &BoundaryCondition, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = field.grid.len();
    let free = bc.free_mask(n);
    // Random direction supported on a block of free nodes.
    let lo = n / 4;
    let hi = 3 * n / 4;
    let w: Vec<[f64; 2]> = (0..n)
        .map(|k| {
            if free[k] && (lo..hi).contains(&k) {
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
    let h = 1e-6;
    let shifted = |s: f64| {
        let v = field
            .values
            .iter()
            .zip(&w)
            .map(|(a, d)| [a[0] + s * d[0], a[1] + s * d[1]])
            .collect();
        eval_E_eps(&Field2D::new(field.grid.clone(), v).unwrap(), p).unwrap().total
    };
    let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
    (fd - analytic).abs() / fd.abs()
}

#[test]
fn gradient_passes_directional_derivative_test() {
    let p = params(0.5, 0.01);
    let g = Grid2D::rectangle(0.5, 1.0, 24, 48, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.3 }, &g).unwrap();
    let mut f = random_field(&g, 1);
    bc.apply(&mut f.values);
    assert!(fd_check(&f, &p, &bc, 2) < 1e-5);

    let g = Grid2D::disc(0.6, 24, 48).unwrap();
    let bc = BoundaryCondition::new(BcKind::DiscDegMinusOne, &g).unwrap();
    let mut f = random_field(&g, 3);
    bc.apply(&mut f.values);
    assert!(fd_check(&f, &p, &bc, 4) < 1e-5);

    let g = Grid2D::rectangle(1.0, 1.0, 30, 20, false).unwrap();
    let f = random_field(&g, 5);
    assert!(fd_check(&f, &p, &no_bc(&g), 6) < 1e-5);
}

#[test]
fn constant_unit_field_has_zero_rhs_and_is_a_fixed_point() {
    let p = params(1.0, 0.02);
    let g = Grid2D::rectangle(1.0, 1.0, 16, 16, true).unwrap();
    let f = Field2D::constant(g.clone(), [0.6, 0.8]);
    let bc = no_bc(&g);
    assert_eq!(max_norm(&rhs(&f, &p, &bc).values), 0.0);
    let opts = FlowOptions::default();
    let mut s = FlowState::new(f.clone(), bc, &p, &opts).unwrap();
    step(&mut s, &p, &opts).unwrap();
    let diff = s
        .field
        .values
        .iter()
        .zip(&f.values)
        .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
        .fold(0.0, f64::max);
    assert!(diff < 1e-12, "{diff}");
}

#[test]
fn divergence_perturbation_follows_grad_div() {
    let (l, eps, delta) = (0.7, 0.01, 1e-4);
    let p = params(l, eps);
    let g = Grid2D::rectangle(0.5, 1.0, 16, 400, true).unwrap();
    let b = |y: f64| (PI * y).cos().powi(2) * (PI * y).cos();
    let b2 = |y: f64| {
        // (cos³ πy)'' = π²(6 cos πy sin² πy − 3 cos³ πy)
        let (s, c) = (PI * y).sin_cos();
        PI * PI * (6.0 * c * s * s - 3.0 * c * c * c)
    };
    let f = sample_analytic(&g, |_, y| [1.0, delta * b(y)]).unwrap();
    let r = rhs(&f, &p, &no_bc(&g));
    let mut worst: f64 = 0.0;
    for j in 40..=360 {
        let y = g.native(0, j).1;
        let want = (l + eps) * delta * b2(y);
        let got = r.get(3, j);
        worst = worst.max((got[1] - want).abs() / (3.0 * PI * PI * delta * l));
        assert!(got[0].abs() < 1e-5, "u1 component {}", got[0]);
    }
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn dirichlet_rows_unchanged_and_trace_monotone() {
    let mut p = params(0.5, 0.01);
    p.h = 1.0;
    let g = Grid2D::rectangle(0.25, 1.0, 25, 200, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.2 }, &g).unwrap();
    let opts = FlowOptions::default();
    let mut s = FlowState::new(random_field(&g, 42), bc.clone(), &p, &opts).unwrap();
    for _ in 0..1000 {
        step(&mut s, &p, &opts).unwrap();
    }
    for (k, v) in bc.fixed.iter().zip(&bc.values) {
        assert_eq!(s.field.values[*k], *v);
    }
    assert_eq!(s.energy_trace.len(), 1001);
    for w in s.energy_trace.windows(2) {
        assert!(w[1].1.total <= w[0].1.total + 1e-12 * w[0].1.total.abs().max(1.0));
    }
    assert!(s.energy().total < s.energy_trace[0].1.total);
}

#[test]
fn dt_underflow_is_reported() {
    let p = params(0.5, 0.01);
    let g = Grid2D::rectangle(0.25, 1.0, 8, 16, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &g).unwrap();
    let opts = FlowOptions {
        dt: Some(1e-3),
        dt_min: 1e-2,
        ..Default::default()
    };
    let mut s = FlowState::new(random_field(&g, 1), bc, &p, &opts).unwrap();
    assert!(matches!(step(&mut s, &p, &opts), Err(Error::DtUnderflow { .. })));
}

#[test]
fn rectangle_recovers_the_one_dimensional_minimum() {
    let p = Params {
        l: 0.5,
        eps: 0.005,
        h: 1.0,
        t: 0.02,
        ..Default::default()
    };
    let g = Grid2D::rectangle(p.t, p.h, 10, 400, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &g).unwrap();
    let opts = FlowOptions {
        dt_max_factor: 16.0,
        growth: 1.2,
        ..Default::default()
    };
    let (s, stages) = run_continuation(random_field(&g, 1), &bc, &p, &opts, 0.08, 1e-3, 1600.0).unwrap();
    assert_eq!(stages.len(), 5);
    let per_length = s.energy().total / (2.0 * p.t);
    let target = min_energy_1d(0.5, 0.0).unwrap();
    assert!(((per_length - target) / target).abs() < 0.05, "{per_length} vs {target}");
    for w in s.energy_trace.windows(2) {
        assert!(w[1].1.total <= w[0].1.total + 1e-12);
    }
    // A single wall: u1 changes sign once along every column.
    let (ni, nj) = g.node_counts();
    for i in 0..ni {
        let flips = (0..nj - 1)
            .filter(|&j| s.field.get(i, j)[0] * s.field.get(i, j + 1)[0] < 0.0)
            .count();
        assert_eq!(flips, 1);
    }
}

#[test]
fn tangential_disc_stays_at_order_eps() {
    let r = 1.0;
    let g = Grid2D::disc(r, 128, 256).unwrap();
    let bc = BoundaryCondition::new(BcKind::DiscTangential, &g).unwrap();
    let r_in = g.x0;
    let mut ratios = Vec::new();
    for eps in [0.02, 0.01] {
        let p = params(1.0, eps);
        let mut init = sample_analytic(&g, |x, y| {
            let q = x.hypot(y);
            [-y / q, x / q]
        })
        .unwrap();
        perturb(&mut init, 0.1, 9);
        let opts = FlowOptions::adaptive();
        let mut s = FlowState::new(init, bc.clone(), &p, &opts).unwrap();
        run_to_equilibrium(&mut s, &p, &opts, 1e-4, 2.0).unwrap();
        let e = s.energy();
        // ê_θ itself costs επ ln(R/r_in); the flow can only lower that.
        assert!(e.total <= 1.01 * eps * PI * (r / r_in).ln(), "{e:?}");
        assert!(e.bulk_div < 1e-2 * e.total);
        ratios.push(e.total / eps);
    }
    // What remains is the core of the central vortex: E/ε ≈ π ln(R/ε) + O(1).
    assert!((ratios[1] - ratios[0] - PI * 2f64.ln()).abs() < 0.5, "{ratios:?}");
}

#[test]
fn crosstie_seeded_run_stays_below_one_dimensional_energy() {
    let loh = 1.6;
    let sol = build_crosstie(loh, 1.0).unwrap();
    let ny = 250;
    let nx = (2.0 * sol.t / (2.0 / ny as f64)).round() as usize;
    let g = Grid2D::rectangle(sol.t, 1.0, nx, ny, true).unwrap();
    let p = Params {
        l: loh,
        eps: 0.01,
        h: 1.0,
        t: sol.t,
        ..Default::default()
    };
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &g).unwrap();
    let opts = FlowOptions {
        dt_max_factor: 16.0,
        growth: 1.2,
        ..Default::default()
    };
    let mut s = FlowState::new(sol.sample_on_grid(&g).unwrap(), bc, &p, &opts).unwrap();
    run_to_equilibrium(&mut s, &p, &opts, 1e-3, 10.0).unwrap();
    let per_length = s.energy().total / (2.0 * sol.t);
    let e_ct = crosstie_energy_per_length(&sol, QuadSpec::default()).unwrap();
    assert!(per_length < min_energy_1d(loh, 0.0).unwrap());
    assert!(((per_length - e_ct) / e_ct).abs() < 0.10, "{per_length} vs {e_ct}");
}

#[test]
fn diagnostics_of_sampled_fields() {
    let g = Grid2D::polar(0.05, 1.0, 64, 128).unwrap();
    let hedgehog = sample_analytic(&g, |x, y| {
        let r2 = x * x + y * y;
        let q = (1.0 - r2).max(0.0).sqrt() / r2.sqrt();
        [x - q * y, y + q * x]
    })
    .unwrap();
    let d = diagnostics(&hedgehog);
    let (ni, nj) = g.node_counts();
    for j in 0..nj {
        for i in 1..ni - 4 {
            assert!((d.divergence[g.index(i, j)] - 2.0).abs() < 1e-2);
        }
    }
    let tangential = sample_analytic(&g, |x, y| {
        let r = x.hypot(y);
        [-y / r, x / r]
    })
    .unwrap();
    let d = diagnostics(&tangential);
    assert!(d.divergence.iter().all(|v| v.abs() < 1e-10));
    let th = g.native(0, 5).1;
    assert!((d.angle[g.index(7, 5)] - (th + PI / 2.0 - if th > PI / 2.0 { 2.0 * PI } else { 0.0 })).abs() < 1e-12);

    let radius: Vec<f64> = g.nodes().iter().map(|p| p[0].hypot(p[1])).collect();
    let sets = contours(&tangential, &radius, &[0.5]);
    assert_eq!(sets[0].1.len(), 1);
    let ring = &sets[0].1[0];
    assert_eq!(ring.first(), ring.last());
    assert!(ring.iter().all(|p| (p[0].hypot(p[1]) - 0.5).abs() < 1e-3));
    let mut buf = Vec::new();
    write_contours_csv(&sets, &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("level,line,x,y\n"));
}

#[test]
fn bc_mismatch_is_rejected() {
    let rect = Grid2D::rectangle(1.0, 1.0, 8, 8, true).unwrap();
    let disc = Grid2D::disc(1.0, 8, 16).unwrap();
    assert!(matches!(
        BoundaryCondition::new(BcKind::DiscTangential, &rect),
        Err(Error::MissingBoundary(_))
    ));
    assert!(BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &disc).is_err());
    assert!(BoundaryCondition::new(BcKind::RectStrip { a: 1.0 }, &rect).is_err());
    let open = Grid2D::rectangle(1.0, 1.0, 8, 8, false).unwrap();
    assert!(BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &open).is_err());
}

#[test]
fn run_reports_max_time() {
    let p = params(0.5, 0.01);
    let g = Grid2D::rectangle(0.25, 1.0, 8, 32, true).unwrap();
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &g).unwrap();
    let opts = FlowOptions::default();
    let mut s = FlowState::new(random_field(&g, 3), bc, &p, &opts).unwrap();
    let sum = run_to_equilibrium(&mut s, &p, &opts, 1e-12, 0.01).unwrap();
    assert!(!sum.converged);
    assert_eq!(sum.reason, StopReason::MaxTime);
    let mut buf = Vec::new();
    s.write_trace_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,total,grad,potential,bulk_div\n"));
    assert_eq!(text.lines().count(), s.energy_trace.len() + 1);
}

#[test]
fn eps_ladder_halves_down_to_target() {
    assert_eq!(eps_ladder(0.08, 0.005), vec![0.08, 0.04, 0.02, 0.01, 0.005]);
    assert_eq!(eps_ladder(0.05, 0.02), vec![0.05, 0.025, 0.02]);
    assert_eq!(eps_ladder(0.01, 0.02), vec![0.02]);
}
