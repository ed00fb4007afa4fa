use num_complex::Complex64;

use crate::error::{Error, Result};

use super::grid::signed_index;
use super::{Grid, ScalarField};

/// Fourier coefficients of a real field, unnormalised (`F_k = Σ_x f_x e^{-ik·x}`),
/// in the same flat order as the grid's values.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

fn transform_in_place(grid: &Grid, buf: &mut [Complex64], forward: bool) {
    let sizes = grid.sizes();
    let plan_for = |axis: usize| {
        let p = grid.plan(axis);
        if forward {
            p.forward.clone()
        } else {
            p.inverse.clone()
        }
    };
    match sizes.len() {
        1 => plan_for(0).process(buf),
        _ => {
            let (n0, n1) = (sizes[0], sizes[1]);
            // Rows are contiguous along axis 1.
            plan_for(1).process(buf);
            let mut cols = vec![Complex64::default(); buf.len()];
            for i0 in 0..n0 {
                for i1 in 0..n1 {
                    cols[i1 * n0 + i0] = buf[i0 * n1 + i1];
                }
            }
            plan_for(0).process(&mut cols);
            for i1 in 0..n1 {
                for i0 in 0..n0 {
                    buf[i0 * n1 + i1] = cols[i1 * n0 + i0];
                }
            }
        }
    }
}

impl Spectrum {
    pub fn forward(f: &ScalarField) -> Self {
        let mut coeffs: Vec<Complex64> =
            f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        transform_in_place(f.grid(), &mut coeffs, true);
        Self {
            grid: f.grid().clone(),
            coeffs,
        }
    }

    /// Inverse transform, normalised so that `forward(f).inverse() == f`.
    /// The imaginary residue is discarded.
    pub fn inverse(&self) -> ScalarField {
        let mut buf = self.coeffs.clone();
        transform_in_place(&self.grid, &mut buf, false);
        let norm = 1.0 / self.grid.len() as f64;
        ScalarField::from_raw(&self.grid, buf.iter().map(|c| c.re * norm).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Multiplies every mode by a real symbol evaluated at `|k|²`.
    pub fn multiply_by_k_sq_symbol(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.k_sq())
            .map(|(c, &k2)| c * symbol(k2))
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Multiplies by `i k_axis`, with the Nyquist coefficient of that axis set to zero.
    pub fn derivative(&self, axis: usize) -> Self {
        let ks = self.grid.deriv_wavenumbers(axis);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(flat, c)| {
                let k = ks[self.grid.multi_index(flat)[axis]];
                Complex64::new(-k * c.im, k * c.re)
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Zeroes every mode whose signed index exceeds `floor(n/3)` on any axis.
    pub fn dealiased(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.retained())
            .map(|(&c, &keep)| if keep { c } else { Complex64::default() })
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// `Σ |f|² ΔV` evaluated from the coefficients (Parseval).
    pub fn energy(&self) -> f64 {
        let n = self.grid.len() as f64;
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.volume() / (n * n)
    }

    /// Coefficient at the given signed per-axis frequencies.
    pub fn mode(&self, signed: [i64; 2]) -> Complex64 {
        let sizes = self.grid.sizes();
        let wrap = |s: i64, n: usize| s.rem_euclid(n as i64) as usize;
        let flat = match sizes.len() {
            1 => wrap(signed[0], sizes[0]),
            _ => wrap(signed[0], sizes[0]) * sizes[1] + wrap(signed[1], sizes[1]),
        };
        self.coeffs[flat]
    }

    /// Signed per-axis frequencies of the mode stored at `flat`.
    pub fn signed_frequencies(&self, flat: usize) -> [i64; 2] {
        let idx = self.grid.multi_index(flat);
        let sizes = self.grid.sizes();
        let mut out = [0; 2];
        for axis in 0..sizes.len() {
            out[axis] = signed_index(idx[axis], sizes[axis]);
        }
        out
    }
}

/// Spectral partial derivative of `f` along `axis`.
pub fn deriv(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let dim = f.grid().dim();
    if axis >= dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    Ok(Spectrum::forward(f).derivative(axis).inverse())
}

/// All first partial derivatives of `f` from a single forward transform.
pub fn gradient(f: &ScalarField) -> Vec<ScalarField> {
    let spec = Spectrum::forward(f);
    (0..f.grid().dim())
        .map(|axis| spec.derivative(axis).inverse())
        .collect()
}

/// 2/3-rule truncation.
pub fn dealias(f: &ScalarField) -> ScalarField {
    Spectrum::forward(f).dealiased().inverse()
}

pub fn transform_roundtrip(f: &ScalarField) -> ScalarField {
    Spectrum::forward(f).inverse()
}
