//! Periodic grids, real fields and the Fourier machinery shared by every other
//! module.
//!
//! Values are stored row-major: for a 2-D grid the flat index of point
//! `(i0, i1)` is `i0 * sizes[1] + i1`, so axis 0 (x) is the slow axis.

mod field;
mod grid;
mod random;
mod transform;

pub use field::{ScalarField, VectorField};
pub use grid::Grid;
pub use random::random_smooth;
pub use transform::{dealias, deriv, gradient, transform_roundtrip, Spectrum};
