//! Build one cross-tie and compare its energy per length with the 1D wall.

use nematic_walls::crosstie::{build_crosstie, crosstie_energy_per_length};
use nematic_walls::energy::QuadSpec;
use nematic_walls::rect1d::min_energy_1d;

fn main() -> nematic_walls::Result<()> {
    let loh = std::env::args().nth(1).map_or(Ok(1.6), |s| s.parse()).expect("L/H must be a number");
    let sol = build_crosstie(loh, 1.0)?;
    let checks = sol.checks(64)?;
    println!("L/H={loh}: T={:.8} α={:.8} t1*={:.8}", sol.t, sol.alpha, sol.t1_star);
    println!("{checks:#?}");
    let e = crosstie_energy_per_length(&sol, QuadSpec::default())?;
    let e1 = min_energy_1d(loh, 0.0)?;
    println!("E/length cross-tie {e:.10}, 1D {e1:.10}, gap {:+.3e}", e - e1);
    Ok(())
}
