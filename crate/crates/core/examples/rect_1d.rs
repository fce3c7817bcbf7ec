//! One-dimensional minimizers on a strip and their ε-recovery profiles.

use nematic_walls::rect1d::{epsilon_ladder, min_energy_1d, minimizer_profile, solve_M};

fn main() -> nematic_walls::Result<()> {
    for (loh, a) in [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 0.4)] {
        let m = solve_M(loh, 1.0, a)?;
        let prof = minimizer_profile(loh, 1.0, a)?;
        println!(
            "L/H={loh} a={a}: M={m:.10} E={:.10} jumps at {:?}",
            min_energy_1d(loh, a)?,
            prof.jumps()
        );
    }
    println!("ε ladder at L=1, H=1:");
    for row in epsilon_ladder(1.0, 1.0, 0.0, &[0.04, 0.02, 0.01, 0.005], 40.0)? {
        println!("  ε={:<6} E={:.8} gap={:.3e}", row.eps, row.energy, row.gap);
    }
    Ok(())
}
