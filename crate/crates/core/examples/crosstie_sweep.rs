//! Where the cross-tie starts to beat the 1D wall.

use nematic_walls::crosstie::{crossing_from_rows, crosstie_sweep};
use nematic_walls::energy::QuadSpec;

fn main() -> nematic_walls::Result<()> {
    let quad = QuadSpec::default();
    let rows = crosstie_sweep(0.5, 3.0, 0.1, quad)?;
    for r in &rows {
        println!("{:.2} {:.8} {:.8} {:+.3e}", r.l_over_h, r.e_crosstie, r.e_1d, r.gap);
    }
    let c = crossing_from_rows(&rows, 1e-6, quad)?;
    println!("crossings {:?}", c.all);
    Ok(())
}
