//! Tangential data on a disc. The limit energy vanishes; at finite ε the
//! flow converges to the vortex and its energy grows like πε ln(R/ε).

use std::f64::consts::PI;

use nematic_walls::disc::tangential_solution;
use nematic_walls::energy::eval_E0_piecewise;
use nematic_walls::field::sample_analytic;
use nematic_walls::gradflow::{perturb, run_to_equilibrium, BcKind, BoundaryCondition, FlowOptions, FlowState};
use nematic_walls::grid::Grid2D;
use nematic_walls::Params;

fn main() -> nematic_walls::Result<()> {
    let r = 1.0;
    let p = Params::new(0.5, 0.02, 1.0, 1.0, r, 0.0)?;
    let e0 = eval_E0_piecewise(&tangential_solution(r)?, &p)?;
    println!("limit energy {}", e0.total);

    let grid = Grid2D::disc(r, 64, 128)?;
    let bc = BoundaryCondition::new(BcKind::DiscTangential, &grid)?;
    let mut init = sample_analytic(&grid, |x, y| {
        let q = x.hypot(y);
        [-y / q, x / q]
    })?;
    perturb(&mut init, 0.1, 9);
    let mut opts = FlowOptions::adaptive();
    opts.dt_max_factor = 16.0;
    let mut state = FlowState::new(init, bc, &p, &opts)?;
    let run = run_to_equilibrium(&mut state, &p, &opts, 1e-4, 2.0)?;
    let e = state.energy();
    println!(
        "ε={} {:?} after {} steps: E={:.5} bound επ ln(R/r_in)={:.5} bulk_div={:.2e}",
        p.eps,
        run.reason,
        run.steps,
        e.total,
        p.eps * PI * (r / grid.x0).ln(),
        e.bulk_div
    );
    Ok(())
}
