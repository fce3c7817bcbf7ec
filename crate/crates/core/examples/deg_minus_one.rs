//! Degree −1 critical point on a disc: the three characteristic regions,
//! their energies and the Euler-Lagrange residuals.

use nematic_walls::characteristics::check_foliation;
use nematic_walls::disc::{build_deg_minus_one, deg_minus_one_field_eval};
use nematic_walls::energy::{criticality_residuals, eval_E0_piecewise};
use nematic_walls::Params;

fn main() -> nematic_walls::Result<()> {
    let (r, l) = (0.6, 0.5);
    let p = Params::new(l, 0.01, 1.0, 1.0, r, 0.0)?;
    let sol = build_deg_minus_one(r, l)?;
    println!("s0 = {:.6}", sol.s0);
    for fam in [&sol.region1, &sol.region2, &sol.region3] {
        let f = check_foliation(fam, 40, 40)?;
        println!(
            "region {:<3} jacobian ∈ [{:.3e}, {:.3e}] crossings {}",
            fam.label, f.min_jacobian, f.max_jacobian, f.crossings
        );
    }
    let pw = sol.as_piecewise();
    let e = eval_E0_piecewise(&pw, &p)?;
    let c = criticality_residuals(&pw, &p)?;
    println!("E = {:.8} (bulk {:.8}, walls {:.8})", e.total, e.bulk_div, e.wall_interior);
    println!("el4 {:.1e} el5 {:.1e}", c.el4, c.el5);
    for (x, y) in [(0.3, 0.1), (-0.2, 0.35), (0.1, -0.1)] {
        let v = deg_minus_one_field_eval(&sol, x, y)?;
        println!("u({x}, {y}) = ({:+.6}, {:+.6}) div {:+.4} {:?}", v.u[0], v.u[1], v.v, v.region);
    }
    Ok(())
}
