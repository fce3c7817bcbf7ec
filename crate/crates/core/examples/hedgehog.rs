//! Hedgehog u = ±x/|x| on the unit disc: the closed form 2πL against quadrature.

use nematic_walls::disc::{hedgehog_energy, hedgehog_solution};
use nematic_walls::energy::{criticality_residuals, eval_E0_piecewise};
use nematic_walls::Params;

fn main() -> nematic_walls::Result<()> {
    for l in [0.25, 0.5, 1.0] {
        let p = Params::with_l(l)?;
        for sign in [1.0, -1.0] {
            let sol = hedgehog_solution(sign)?;
            let e = eval_E0_piecewise(&sol, &p)?;
            let c = criticality_residuals(&sol, &p)?;
            println!(
                "L={l:<5} sign={sign:+} E={:.12} 2πL={:.12} el5={:.1e}",
                e.total,
                hedgehog_energy(l),
                c.el5
            );
        }
    }
    Ok(())
}
