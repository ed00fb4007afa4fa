use crate::dynamics::EPDiffState;
use crate::error::{Error, Result};
use crate::operators::{apply_l, OperatorParams};
use crate::spectral::{Grid, ScalarField, VectorField};

/// Periodic peakon `c cosh((L/2 - d)/α) / cosh(L/(2α))`, with `d` the periodic
/// distance to `center`.
pub fn peakon_profile(grid: &Grid, amplitude: f64, width: f64, center: f64) -> ScalarField {
    let half = 0.5 * grid.lengths()[0];
    // cosh(a)/cosh(b) = e^{a-b} (1 + e^{-2a}) / (1 + e^{-2b}); stays finite for L ≫ α.
    let scaled = |s: f64| (-2.0 * s).exp().ln_1p();
    let denom = scaled(half / width);
    ScalarField::from_fn(grid, |x| {
        let d = grid.periodic_offset(0, x[0], center);
        let a = (half - d) / width;
        amplitude * (a - half / width + scaled(a) - denom).exp()
    })
}

/// 1-D EPDiff state of the periodic peakon with `ν = 1` and `α = width`.
pub fn peakon_ic(grid: &Grid, amplitude: f64, width: f64, center: f64) -> Result<EPDiffState> {
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: grid.dim(),
        });
    }
    let op = OperatorParams::new(width, 1.0, 1)?;
    let u = VectorField::new(vec![peakon_profile(grid, amplitude, width, center)])?;
    EPDiffState::new(apply_l(&u, &op)?, op)
}

/// `A exp(-|x - c|² / (2w²))` with periodic distances.
pub fn gaussian_bump(grid: &Grid, amplitude: f64, width: f64, center: &[f64]) -> ScalarField {
    ScalarField::from_fn(grid, |x| {
        let r_sq: f64 = (0..grid.dim())
            .map(|axis| grid.periodic_offset(axis, x[axis], center[axis]).powi(2))
            .sum();
        amplitude * (-r_sq / (2.0 * width * width)).exp()
    })
}
