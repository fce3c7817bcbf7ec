//! Critical points, wall energies and gradient flows for thin nematic
//! films with a strong divergence penalty.

pub mod annulus;
pub mod characteristics;
pub mod cli;
pub mod crosstie;
pub mod disc;
pub mod energy;
pub mod error;
pub mod field;
pub mod gradflow;
pub mod grid;
pub mod jump;
pub mod numerics;
pub mod params;
pub mod rect1d;

pub use error::{Error, Result};
pub use params::Params;
