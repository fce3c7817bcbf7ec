//! Small numerical kernels: root finding, quadrature, interpolation,
//! reductions and contouring.

pub mod contour;
pub mod interp;
pub mod quad;
pub mod roots;
pub mod sum;

pub use contour::{marching_squares, Polyline};
pub use interp::Pchip;
pub use quad::{composite_gl, gauss_legendre, GaussRule};
pub use roots::{bisect, brent, golden_section_min, polish_newton};
pub use sum::pairwise_sum;
