//! Radial minimizers on the annulus 1 < r < R: an interior wall for
//! small L, the inner boundary wall otherwise.

use nematic_walls::annulus::{annulus_radial_minimizer, scan_g, small_l_interior_bound};

fn main() -> nematic_walls::Result<()> {
    let r = 3.0;
    println!("R={r}: interior wall guaranteed below L={:.5}", small_l_interior_bound(r));
    for l in [0.05, 0.2, 0.5, 1.0, 2.0] {
        let sol = annulus_radial_minimizer(r, l)?;
        let roots = scan_g(r, l)?.roots;
        println!(
            "L={l:<4} {:?} ρ={:.5} a={:.5} E={:.6} roots {:?}",
            sol.regime(),
            sol.rho,
            sol.a,
            sol.energy.total,
            roots
        );
    }
    Ok(())
}
