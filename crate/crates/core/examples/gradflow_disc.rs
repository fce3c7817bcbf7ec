//! Degree −1 boundary data on a disc: relax a perturbed smooth field and
//! measure how far the walls sit from the diagonals.

use nematic_walls::field::sample_analytic;
use nematic_walls::gradflow::{
    diagnostics, diagonal_jump_offsets, perturb, run_continuation, BcKind, BoundaryCondition, FlowOptions,
};
use nematic_walls::grid::Grid2D;
use nematic_walls::Params;

fn main() -> nematic_walls::Result<()> {
    let (r, l, eps) = (0.6, 0.5, 0.005);
    let n: usize = std::env::args().nth(1).map_or(128, |s| s.parse().expect("grid size"));
    let p = Params::new(l, eps, 1.0, 1.0, r, 0.0)?;
    let grid = Grid2D::disc(r, n, n)?;
    let bc = BoundaryCondition::new(BcKind::DiscDegMinusOne, &grid)?;
    let mut init = sample_analytic(&grid, |x, y| {
        let q = x.hypot(y);
        [x / q, -y / q]
    })?;
    perturb(&mut init, 0.3, 11);
    let mut opts = FlowOptions::adaptive();
    opts.dt_max_factor = 16.0;
    let (state, stages) = run_continuation(init, &bc, &p, &opts, 0.04, 1e-3, 1600.0)?;
    for s in &stages {
        println!("ε={:<6} {:?} steps {:>5} E={:.6}", s.eps, s.summary.reason, s.summary.steps, s.energy);
    }
    let js = diagonal_jump_offsets(&state.field, 0.1 * r, 0.9 * r);
    let worst = js.iter().map(|j| j.offset_cells()).fold(0.0, f64::max);
    println!("{} ring samples, worst wall offset {worst:.3} cells", js.len());
    let d = diagnostics(&state.field);
    let max_div = d.divergence.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("max |div u| = {max_div:.3}");
    Ok(())
}
