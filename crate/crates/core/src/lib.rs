//! Pseudospectral solvers for the shallow-water and EPDiff equations on
//! periodic 1-D and 2-D boxes.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: periodic grids, fields, FFTs, spectral derivatives and the
//!   2/3 dealiasing rule.
//! * [`operators`]: the fractional Yukawa operator `(1 - α²∇²)^ν`, its inverse,
//!   vector-calculus helpers and the shallow-water Poisson operators.
//! * [`greens`]: Gamma, modified Bessel `K` of real order and the closed-form
//!   Green's kernel of the Yukawa operator, with spectral validation.
//! * [`dynamics`]: right-hand sides for the primitive and Hamiltonian
//!   shallow-water forms and the advective and curl EPDiff forms.
//! * [`integrate`]: classical RK4, initial conditions, run orchestration and
//!   conservation diagnostics.

pub mod dynamics;
pub mod error;
pub mod greens;
pub mod integrate;
pub mod operators;
pub mod spectral;

pub use error::{Error, Result};
pub use operators::OperatorParams;
pub use spectral::{Grid, ScalarField, VectorField};
