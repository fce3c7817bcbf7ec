//! Gradient flow on a periodic strip from random data, with ε-continuation,
//! compared with the 1D minimum.

use nematic_walls::gradflow::{random_field, run_continuation, BcKind, BoundaryCondition, FlowOptions};
use nematic_walls::grid::Grid2D;
use nematic_walls::rect1d::min_energy_1d;
use nematic_walls::Params;

fn main() -> nematic_walls::Result<()> {
    let (l, t, eps) = (0.5, 0.02, 0.005);
    let p = Params::new(l, eps, 1.0, t, 1.0, 0.0)?;
    let grid = Grid2D::rectangle(t, 1.0, 10, 400, true)?;
    let bc = BoundaryCondition::new(BcKind::RectStrip { a: 0.0 }, &grid)?;
    let mut opts = FlowOptions::adaptive();
    opts.dt_max_factor = 16.0;
    let (state, stages) = run_continuation(random_field(&grid, 3), &bc, &p, &opts, 0.08, 1e-3, 1600.0)?;
    for s in &stages {
        println!(
            "ε={:<6} {:?} steps {:>5} E/2T={:.6}",
            s.eps,
            s.summary.reason,
            s.summary.steps,
            s.energy / (2.0 * t)
        );
    }
    let e = state.energy().total / (2.0 * t);
    let e1 = min_energy_1d(l, 0.0)?;
    println!("E/2T={e:.6} 1D minimum {e1:.6} relative gap {:.2}%", 100.0 * (e - e1) / e1);
    Ok(())
}
