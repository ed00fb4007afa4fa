use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operators::{apply_l_inv, OperatorParams};
use crate::spectral::{Grid, ScalarField, VectorField};

use super::special::{bessel_k, gamma_fn, BESSEL_MAX_Z};

/// Largest tolerated periodic-image weight `e^{-L/(2α)}`.
pub const IMAGE_TOLERANCE: f64 = 1e-10;

/// Operator parameters plus the Bessel order `ν - n/2` of the kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenParams {
    pub op: OperatorParams,
    pub order: f64,
}

impl GreenParams {
    pub fn new(op: OperatorParams) -> Self {
        Self {
            op,
            order: op.nu - op.dim as f64 / 2.0,
        }
    }

    /// `2^{n/2-ν} / ((2πα)^{n/2} α^ν Γ(ν))`.
    fn prefactor(&self) -> Result<f64> {
        let n = self.op.dim as f64;
        let (alpha, nu) = (self.op.alpha, self.op.nu);
        Ok(2f64.powf(n / 2.0 - nu)
            / ((2.0 * PI * alpha).powf(n / 2.0) * alpha.powf(nu) * gamma_fn(nu)?))
    }
}

/// The closed-form scalar kernel at radius `r > 0`, evaluated literally.
pub fn green_scalar(r: f64, gp: &GreenParams) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {r}"
        )));
    }
    let k = bessel_k(gp.order, r / gp.op.alpha)?;
    Ok(gp.prefactor()? * r.powf(gp.order) * k)
}

/// Outcome of fitting the closed form to the spectral kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Least-squares `c` in `spectral ≈ c · green_scalar`.
    pub constant_ratio: f64,
    /// `max |c·G - g_spec|` over the fit region, relative to `max |g_spec|`.
    pub max_shape_error: f64,
    pub fit_points: usize,
    pub r_min: f64,
    pub r_max: f64,
}

fn check_grid(gp: &GreenParams, grid: &Grid) -> Result<()> {
    if grid.dim() != gp.op.dim {
        return Err(Error::DimensionMismatch {
            expected: gp.op.dim,
            found: grid.dim(),
        });
    }
    let shortest = grid.lengths().iter().copied().fold(f64::INFINITY, f64::min);
    let image = (-shortest / (2.0 * gp.op.alpha)).exp();
    if image >= IMAGE_TOLERANCE {
        return Err(Error::GridTooSmall(format!(
            "e^(-L/(2 alpha)) = {image:.3e} for L = {shortest}, alpha = {}; need < {IMAGE_TOLERANCE:e}",
            gp.op.alpha
        )));
    }
    Ok(())
}

/// `L^{-ν}` applied to a discrete unit delta (`1/ΔV` at the origin).
pub fn spectral_kernel(grid: &Grid, op: &OperatorParams) -> Result<ScalarField> {
    let mut values = vec![0.0; grid.len()];
    values[0] = 1.0 / grid.cell_volume();
    apply_l_inv(&ScalarField::from_values(grid, values)?, op)
}

/// Minimum-image distance of the grid point at `flat` from the origin.
fn radius(grid: &Grid, flat: usize) -> f64 {
    let x = grid.point(flat);
    (0..grid.dim())
        .map(|axis| grid.periodic_offset(axis, x[axis], 0.0).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Fits `c · green_scalar(r)` to the spectral kernel on `2α <= r <= L/2`
/// (also capped at the Bessel envelope `r/α <= 60`).
pub fn green_validate(gp: &GreenParams, grid: &Grid) -> Result<ValidationReport> {
    check_grid(gp, grid)?;
    let spectral = spectral_kernel(grid, &gp.op)?;
    let alpha = gp.op.alpha;
    let shortest = grid.lengths().iter().copied().fold(f64::INFINITY, f64::min);
    let r_min = 2.0 * alpha;
    let r_max = (0.5 * shortest).min(BESSEL_MAX_Z * alpha);

    let mut samples = Vec::new();
    for (flat, &g) in spectral.values().iter().enumerate() {
        let r = radius(grid, flat);
        if (r_min..=r_max).contains(&r) {
            samples.push((green_scalar(r, gp)?, g));
        }
    }
    if samples.is_empty() {
        return Err(Error::GridTooSmall(
            "no grid points in the fit region".into(),
        ));
    }
    let (num, den) = samples.iter().fold((0.0, 0.0), |(n, d), &(model, g)| {
        (n + model * g, d + model * model)
    });
    let c = num / den;
    let scale = spectral.max_abs();
    let worst = samples
        .iter()
        .fold(0.0f64, |m, &(model, g)| m.max((c * model - g).abs()));
    Ok(ValidationReport {
        constant_ratio: c,
        max_shape_error: worst / scale,
        fit_points: samples.len(),
        r_min,
        r_max,
    })
}

/// Velocity from momentum by direct real-space quadrature of `u = G * m`.
///
/// The kernel is `c · green_scalar(r)` with `c` from [`green_validate`]; the
/// origin cell takes the spectral kernel's value, and radii beyond the Bessel
/// envelope contribute zero. Cost is quadratic in the number of grid points.
pub fn green_convolve(m: &VectorField, gp: &GreenParams) -> Result<VectorField> {
    let grid = m.grid();
    let report = green_validate(gp, grid)?;
    let origin = spectral_kernel(grid, &gp.op)?.values()[0];
    let alpha = gp.op.alpha;
    let table: Vec<f64> = (0..grid.len())
        .map(|flat| {
            let r = radius(grid, flat);
            if flat == 0 {
                Ok(origin)
            } else if r / alpha > BESSEL_MAX_Z {
                Ok(0.0)
            } else {
                Ok(report.constant_ratio * green_scalar(r, gp)?)
            }
        })
        .collect::<Result<_>>()?;

    let sizes = grid.sizes().to_vec();
    let dv = grid.cell_volume();
    let offset = |i: usize, j: usize| -> usize {
        let (a, b) = (grid.multi_index(i), grid.multi_index(j));
        match sizes.len() {
            1 => (a[0] + sizes[0] - b[0]) % sizes[0],
            _ => {
                let d0 = (a[0] + sizes[0] - b[0]) % sizes[0];
                let d1 = (a[1] + sizes[1] - b[1]) % sizes[1];
                d0 * sizes[1] + d1
            }
        }
    };
    let convolve = |c: &ScalarField| {
        let src = c.values();
        let out = (0..grid.len())
            .map(|i| {
                src.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(j, v)| table[offset(i, j)] * v)
                    .sum::<f64>()
                    * dv
            })
            .collect();
        ScalarField::from_raw(grid, out)
    };
    Ok(m.map_components(convolve))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn gp(alpha: f64, nu: f64, dim: usize) -> GreenParams {
        GreenParams::new(OperatorParams::new(alpha, nu, dim).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn order_is_nu_minus_half_dimension() {
        assert_eq!(gp(0.5, 1.5, 2).order, 0.5);
        assert_eq!(gp(0.5, 1.0, 1).order, 0.5);
        assert_eq!(gp(0.5, 0.75, 2).order, -0.25);
    }

    #[test]
    fn scalar_kernel_reference_values() {
        // n=1, ν=1, α=1, r=1 composed by hand: 2^{-1/2} / (2π)^{1/2} · K_{1/2}(1).
        let composed = 2f64.powf(-0.5) / (2.0 * PI).sqrt() * bessel_k(0.5, 1.0).unwrap();
        let got = green_scalar(1.0, &gp(1.0, 1.0, 1)).unwrap();
        assert!(rel(got, composed) < 1e-13);
        // High-precision reference values.
        assert!(rel(got, 0.130_065_023_755_722_224_09) < 1e-12);
        assert!(
            rel(
                green_scalar(0.3, &gp(0.5, 1.5, 2)).unwrap(),
                0.349_384_338_842_858_996_39
            ) < 1e-11
        );
        assert!(
            rel(
                green_scalar(1.0, &gp(0.25, 2.0, 2)).unwrap(),
                0.063_577_937_759_710_270_662
            ) < 1e-11
        );
        assert!(
            rel(
                green_scalar(0.1, &gp(0.25, 2.0, 1)).unwrap(),
                0.663_582_990_163_910_967_32
            ) < 1e-11
        );
    }

    #[test]
    fn scalar_kernel_decreases_in_radius() {
        let p = gp(0.5, 1.5, 2);
        let mut last = f64::INFINITY;
        for i in 0..=490 {
            let r = 0.1 + i as f64 * 0.01;
            let v = green_scalar(r, &p).unwrap();
            assert!(v < last, "r={r}");
            last = v;
        }
    }

    #[test]
    fn bessel_factor_depends_only_on_r_over_alpha() {
        let (a, b) = (gp(0.3, 1.8, 2), gp(0.6, 1.8, 2));
        for r in [0.05, 0.4, 1.3] {
            let strip = |g: &GreenParams, r: f64| {
                green_scalar(r, g).unwrap() / (g.prefactor().unwrap() * r.powf(g.order))
            };
            assert!(rel(strip(&a, r), strip(&b, 2.0 * r)) < 1e-13);
        }
    }

    #[test]
    fn scalar_kernel_errors() {
        let p = gp(0.5, 1.0, 1);
        assert!(green_scalar(0.0, &p).is_err());
        assert!(green_scalar(-1.0, &p).is_err());
        assert!(green_scalar(40.0, &p).is_err());
        assert!(green_scalar(1.0, &gp(0.5, 8.0, 1)).is_err());
    }

    #[test]
    fn spectral_kernel_is_the_exponential_in_1d() {
        // The inverse transform of 1/(1+α²k²) on the line is e^{-|x|/α}/(2α).
        let alpha = 1.0;
        let grid = Grid::new_1d(1 << 18, 48.0 * alpha).unwrap();
        let p = gp(alpha, 1.0, 1);
        let g = spectral_kernel(&grid, &p.op).unwrap();
        let dx = grid.spacings()[0];
        let mut worst = 0.0f64;
        for (flat, v) in g.values().iter().enumerate() {
            let r = radius(&grid, flat);
            if r > 2.0 * dx {
                worst = worst.max((v - (-r / alpha).exp() / (2.0 * alpha)).abs());
            }
        }
        assert!(worst < 1e-6, "{worst}");
        let report = green_validate(&p, &grid).unwrap();
        assert!(report.max_shape_error < 1e-6);
    }

    #[test]
    fn validation_ratio_in_one_and_two_dimensions() {
        // Hankel-transform normalisation differs from the closed form by 2^{1-n/2}.
        let grid = Grid::new_1d(4096, 16.0).unwrap();
        let report = green_validate(&gp(0.25, 1.0, 1), &grid).unwrap();
        assert!(report.max_shape_error < 1e-6);
        assert!((report.constant_ratio - 2f64.sqrt()).abs() < 1e-6);

        let plane = Grid::new_2d(512, 512, 16.0, 16.0).unwrap();
        let report = green_validate(&gp(0.25, 1.5, 2), &plane).unwrap();
        assert!(report.max_shape_error < 1e-4, "{report:?}");
        assert!((report.constant_ratio - 1.0).abs() < 1e-4);
    }

    #[test]
    fn validation_rejects_small_box() {
        let grid = Grid::new_1d(256, 10.0).unwrap();
        assert!(matches!(
            green_validate(&gp(0.25, 1.0, 1), &grid),
            Err(Error::GridTooSmall(_))
        ));
        let plane = Grid::new_2d(16, 16, 16.0, 16.0).unwrap();
        assert!(matches!(
            green_validate(&gp(0.25, 1.0, 1), &plane),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn gaussian(grid: &Grid, center: f64, width: f64) -> ScalarField {
        ScalarField::from_fn(grid, |x| {
            let d = grid.periodic_offset(0, x[0], center);
            (-d * d / (2.0 * width * width)).exp()
        })
    }

    #[test]
    fn convolution_of_delta_is_the_kernel() {
        let grid = Grid::new_1d(512, 16.0).unwrap();
        let p = gp(0.25, 1.0, 1);
        let mut values = vec![0.0; grid.len()];
        values[0] = 1.0 / grid.cell_volume();
        let delta =
            VectorField::new(vec![ScalarField::from_values(&grid, values).unwrap()]).unwrap();
        let u = green_convolve(&delta, &p).unwrap();
        let c = green_validate(&p, &grid).unwrap().constant_ratio;
        let spectral = spectral_kernel(&grid, &p.op).unwrap();
        assert!((u.component(0).values()[0] - spectral.values()[0]).abs() < 1e-12);
        for flat in 1..grid.len() {
            let expected = c * green_scalar(radius(&grid, flat), &p).unwrap();
            assert!((u.component(0).values()[flat] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_matches_spectral_inverse() {
        let grid = Grid::new_1d(1024, 16.0).unwrap();
        let p = gp(0.25, 1.0, 1);
        let m = VectorField::new(vec![gaussian(&grid, 5.0, 0.2)]).unwrap();
        let direct = green_convolve(&m, &p).unwrap();
        let spectral = apply_l_inv(&m, &p.op).unwrap();
        assert!(
            direct.max_diff(&spectral) < 1e-4,
            "{}",
            direct.max_diff(&spectral)
        );
    }

    #[test]
    fn convolution_is_linear() {
        let grid = Grid::new_1d(256, 16.0).unwrap();
        let p = gp(0.25, 2.0, 1);
        let a = VectorField::new(vec![gaussian(&grid, 4.0, 0.3)]).unwrap();
        let b = VectorField::new(vec![gaussian(&grid, 9.0, 0.5).scale(-2.0)]).unwrap();
        let sum = green_convolve(&a.axpy(1.0, &b), &p).unwrap();
        let parts = green_convolve(&a, &p)
            .unwrap()
            .axpy(1.0, &green_convolve(&b, &p).unwrap());
        assert!(sum.max_diff(&parts) < 1e-12);
    }
}
