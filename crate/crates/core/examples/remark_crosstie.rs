//! The explicit unit-period cross-tie map and its wall energy.

use nematic_walls::crosstie::{remark_crosstie_energy, remark_crosstie_map};

fn main() -> nematic_walls::Result<()> {
    for (x, y) in [(0.0, 0.5), (0.25, 0.1), (-0.25, 0.1), (0.1, -2.0)] {
        let u = remark_crosstie_map(x, y);
        println!("u({x}, {y}) = ({:+.6}, {:+.6})", u[0], u[1]);
    }
    for cut in [1.0, 4.0, 16.0] {
        println!("energy per period, cut at |y| = {cut}: {:.12}", remark_crosstie_energy(cut)?);
    }
    Ok(())
}
