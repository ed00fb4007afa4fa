//! The fractional Yukawa operator `L^ν = (I - α²∇²)^ν` as a Fourier multiplier,
//! vector-calculus helpers, and the Poisson operators of the shallow-water
//! Hamiltonian structure.

use log::warn;

use crate::error::{Error, Result};
use crate::spectral::{self, Grid, ScalarField, Spectrum, VectorField};

/// Length scale, power and spatial dimension of `L^ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorParams {
    pub alpha: f64,
    pub nu: f64,
    pub dim: usize,
}

impl OperatorParams {
    /// Requires `alpha > 0` and `nu > 0`. `alpha² > 1` is accepted with a
    /// logged warning: the usual modelling range is `alpha² <= 1`.
    pub fn new(alpha: f64, nu: f64, dim: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nu must be positive, got {nu}"
            )));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidParameter(format!(
                "dimension must be 1 or 2, got {dim}"
            )));
        }
        let params = Self { alpha, nu, dim };
        if params.outside_modeling_range() {
            warn!(
                "alpha^2 = {} exceeds 1; outside the usual modelling range",
                alpha * alpha
            );
        }
        Ok(params)
    }

    pub fn outside_modeling_range(&self) -> bool {
        self.alpha * self.alpha > 1.0
    }
}

/// Forward symbol `(1 + α²|k|²)^ν`.
pub fn yukawa_symbol(k_sq: f64, p: &OperatorParams) -> f64 {
    (1.0 + p.alpha * p.alpha * k_sq).powf(p.nu)
}

/// Fields that Fourier multipliers act on component by component.
pub trait Componentwise: Sized {
    fn grid(&self) -> &Grid;
    fn map_each(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self;
}

impl Componentwise for ScalarField {
    fn grid(&self) -> &Grid {
        ScalarField::grid(self)
    }

    fn map_each(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        f(self)
    }
}

impl Componentwise for VectorField {
    fn grid(&self) -> &Grid {
        VectorField::grid(self)
    }

    fn map_each(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        self.map_components(f)
    }
}

fn check_dim(grid: &Grid, p: &OperatorParams) -> Result<()> {
    if grid.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: grid.dim(),
        });
    }
    Ok(())
}

/// `m = L^ν u`.
pub fn apply_l<F: Componentwise>(u: &F, p: &OperatorParams) -> Result<F> {
    check_dim(u.grid(), p)?;
    Ok(u.map_each(|c| {
        Spectrum::forward(c)
            .multiply_by_k_sq_symbol(|k2| yukawa_symbol(k2, p))
            .inverse()
    }))
}

/// `u = L^{-ν} m`, the spectral inverse.
pub fn apply_l_inv<F: Componentwise>(m: &F, p: &OperatorParams) -> Result<F> {
    check_dim(m.grid(), p)?;
    Ok(m.map_each(|c| {
        Spectrum::forward(c)
            .multiply_by_k_sq_symbol(|k2| 1.0 / yukawa_symbol(k2, p))
            .inverse()
    }))
}

pub fn grad(f: &ScalarField) -> VectorField {
    VectorField::from_raw(spectral::gradient(f))
}

pub fn div(v: &VectorField) -> ScalarField {
    let mut acc = spectral::deriv(v.component(0), 0).expect("axis 0 exists");
    for axis in 1..v.dim() {
        acc = &acc + &spectral::deriv(v.component(axis), axis).expect("axis < dim");
    }
    acc
}

/// z-component of the curl of `(v₁, v₂, 0)`: `∂₁v₂ - ∂₂v₁`.
pub fn curl_embedded(v: &VectorField) -> Result<ScalarField> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: v.dim(),
        });
    }
    let d1v2 = spectral::deriv(v.component(1), 0)?;
    let d2v1 = spectral::deriv(v.component(0), 1)?;
    Ok(&d1v2 - &d2v1)
}

fn ensure_same_grid<'a>(grids: impl IntoIterator<Item = &'a Grid>) -> Result<()> {
    let mut iter = grids.into_iter();
    let Some(first) = iter.next() else {
        return Ok(());
    };
    if iter.any(|g| g != first) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn d(f: &ScalarField, axis: usize) -> ScalarField {
    spectral::deriv(f, axis).expect("axis checked by caller")
}

/// Applies the 1-D shallow-water Poisson matrix to `(a, b)`:
///
/// ```text
/// -( m ∂a + ∂(m a) + η ∂b ,  ∂(η a) )
/// ```
pub fn poisson_apply_1d(
    m: &ScalarField,
    eta: &ScalarField,
    a: &ScalarField,
    b: &ScalarField,
) -> Result<(ScalarField, ScalarField)> {
    ensure_same_grid([m.grid(), eta.grid(), a.grid(), b.grid()])?;
    if m.grid().dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: m.grid().dim(),
        });
    }
    let first = &(&(m * &d(a, 0)) + &d(&(m * a), 0)) + &(eta * &d(b, 0));
    let second = d(&(eta * a), 0);
    Ok((-&first, -&second))
}

/// Applies the n-D shallow-water Poisson matrix to `(a, b)`. Momentum
/// component `i` is
///
/// ```text
/// -( Σ_j m_j ∂_i a_j + Σ_j ∂_j(m_i a_j) + η ∂_i b )
/// ```
///
/// and the scalar output is `-Σ_j ∂_j(η a_j)`. With `a = δH/δm`,
/// `b = δH/δη` this reduces to `-∂_j(m_i u_j) - gη∂_iη`.
#[allow(clippy::needless_range_loop)]
pub fn poisson_apply_nd(
    m: &VectorField,
    eta: &ScalarField,
    a: &VectorField,
    b: &ScalarField,
) -> Result<(VectorField, ScalarField)> {
    ensure_same_grid([m.grid(), eta.grid(), a.grid(), b.grid()])?;
    let dim = m.dim();
    let grad_a: Vec<Vec<ScalarField>> = a.components().iter().map(spectral::gradient).collect();
    let grad_b = spectral::gradient(b);

    let mut momentum = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc = eta * &grad_b[i];
        for j in 0..dim {
            acc = &acc + &(m.component(j) * &grad_a[j][i]);
            acc = &acc + &d(&(m.component(i) * a.component(j)), j);
        }
        momentum.push(-&acc);
    }
    let mut mass = ScalarField::zeros(eta.grid());
    for j in 0..dim {
        mass = &mass - &d(&(eta * a.component(j)), j);
    }
    Ok((VectorField::from_raw(momentum), mass))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::random_smooth;

    fn p(alpha: f64, nu: f64, dim: usize) -> OperatorParams {
        OperatorParams::new(alpha, nu, dim).unwrap()
    }

    #[test]
    fn symbol_values() {
        assert_eq!(yukawa_symbol(0.0, &p(0.3, 2.7, 1)), 1.0);
        assert!((yukawa_symbol(1.0, &p(1.0, 1.0, 1)) - 2.0).abs() < 1e-15);
        assert!((yukawa_symbol(4.0, &p(0.5, 1.5, 2)) - 2.828_427_124_746_19).abs() < 1e-14);
    }

    #[test]
    fn symbol_is_monotone() {
        let params = p(0.7, 1.3, 2);
        let mut last = yukawa_symbol(0.0, &params);
        for i in 1..200 {
            let s = yukawa_symbol(i as f64 * 0.37, &params);
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn params_validation() {
        assert!(OperatorParams::new(0.0, 1.0, 1).is_err());
        assert!(OperatorParams::new(1.0, -0.5, 1).is_err());
        assert!(OperatorParams::new(1.0, 1.0, 3).is_err());
        let wide = OperatorParams::new(1.5, 1.0, 1).unwrap();
        assert!(wide.outside_modeling_range());
        assert!(!p(1.0, 1.0, 1).outside_modeling_range());
    }

    #[test]
    fn apply_l_single_modes() {
        // 16 points keeps the largest symbol small enough that FFT roundoff in
        // the empty high modes stays below the tolerance after amplification.
        let g = Grid::new_1d(16, 2.0 * PI).unwrap();
        let c = ScalarField::constant(&g, 3.5);
        assert!(apply_l(&c, &p(0.3, 2.5, 1)).unwrap().max_diff(&c) < 1e-13);

        let s = ScalarField::from_fn(&g, |x| x[0].sin());
        let m1 = apply_l(&s, &p(1.0, 1.0, 1)).unwrap();
        assert!(m1.max_diff(&s.scale(2.0)) < 1e-12);
        let m2 = apply_l(&s, &p(1.0, 2.0, 1)).unwrap();
        assert!(m2.max_diff(&s.scale(4.0)) < 1e-12);

        let u = apply_l_inv(&s.scale(2.0), &p(1.0, 1.0, 1)).unwrap();
        assert!(u.max_diff(&s) < 1e-12);
        assert_eq!(
            apply_l_inv(&ScalarField::zeros(&g), &p(1.0, 1.0, 1))
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn apply_l_rejects_dimension_mismatch() {
        let g = Grid::new_2d(8, 8, 1.0, 1.0).unwrap();
        let f = ScalarField::zeros(&g);
        assert_eq!(
            apply_l(&f, &p(0.5, 1.0, 1)),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(apply_l_inv(&VectorField::zeros(&g), &p(0.5, 1.0, 1)).is_err());
    }

    #[test]
    fn inverse_after_forward_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grids = [
            Grid::new_1d(64, 2.0 * PI).unwrap(),
            Grid::new_2d(32, 32, 2.0 * PI, 2.0 * PI).unwrap(),
        ];
        let params: Vec<(f64, f64)> = (0..10)
            .map(|_| (rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=4.0)))
            .collect();
        for i in 0..100 {
            let g = &grids[i % 2];
            let (alpha, nu) = params[i % 10];
            let op = p(alpha, nu, g.dim());
            let f = random_smooth(g, 4, &mut rng);
            let there_and_back = apply_l_inv(&apply_l(&f, &op).unwrap(), &op).unwrap();
            assert!(there_and_back.max_diff(&f) < 1e-12, "alpha={alpha} nu={nu}");
        }
    }

    /// Largest symbol value on the grid; roundoff left in empty modes by the
    /// first transform is amplified by up to this factor.
    fn symbol_range(g: &Grid, op: &OperatorParams) -> f64 {
        g.k_sq()
            .iter()
            .fold(1.0, |m, &k2| m.max(yukawa_symbol(k2, op)))
    }

    #[test]
    fn forward_after_inverse_is_identity_when_conditioned() {
        // Box of side 20π: wavenumbers step by 0.1, so even α=1, ν=4 keeps the
        // symbol range modest on a 16-point axis.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let grids = [
            Grid::new_1d(16, 20.0 * PI).unwrap(),
            Grid::new_2d(16, 16, 20.0 * PI, 20.0 * PI).unwrap(),
        ];
        let params: Vec<(f64, f64)> = (0..10)
            .map(|_| (rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=4.0)))
            .collect();
        for i in 0..100 {
            let g = &grids[i % 2];
            let (alpha, nu) = params[i % 10];
            let op = p(alpha, nu, g.dim());
            let f = random_smooth(g, 4, &mut rng);
            let back_and_there = apply_l(&apply_l_inv(&f, &op).unwrap(), &op).unwrap();
            assert!(back_and_there.max_diff(&f) < 1e-12, "alpha={alpha} nu={nu}");
        }
    }

    #[test]
    fn forward_after_inverse_error_tracks_symbol_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = Grid::new_1d(64, 2.0 * PI).unwrap();
        for (alpha, nu) in [(0.1, 1.0), (0.5, 2.0), (1.0, 3.0), (1.0, 4.0)] {
            let op = p(alpha, nu, 1);
            let f = random_smooth(&g, 4, &mut rng);
            let err = apply_l(&apply_l_inv(&f, &op).unwrap(), &op)
                .unwrap()
                .max_diff(&f);
            assert!(
                err < 64.0 * f64::EPSILON * symbol_range(&g, &op),
                "alpha={alpha} nu={nu}: {err}"
            );
        }
    }

    #[test]
    fn l_is_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Grid::new_2d(32, 16, 3.0, 2.0).unwrap();
        let op = p(0.4, 1.7, 2);
        for _ in 0..20 {
            let u = random_smooth(&g, 4, &mut rng);
            let w = random_smooth(&g, 4, &mut rng);
            let lhs = apply_l(&u, &op).unwrap().inner(&w);
            let rhs = u.inner(&apply_l(&w, &op).unwrap());
            assert!((lhs - rhs).abs() < 1e-11);
        }
    }

    #[test]
    fn vector_calculus_examples() {
        let g = Grid::new_2d(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let c = ScalarField::constant(&g, 2.0);
        assert!(grad(&c).max_abs() < 1e-13);

        let f = ScalarField::from_fn(&g, |x| x[0].sin() + x[1].cos());
        let lap = div(&grad(&f));
        assert!(lap.max_diff(&f.scale(-1.0)) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let f = random_smooth(&g, 6, &mut rng);
            assert!(curl_embedded(&grad(&f)).unwrap().max_abs() < 1e-11);
        }

        let line = Grid::new_1d(8, 1.0).unwrap();
        assert!(curl_embedded(&VectorField::zeros(&line)).is_err());
    }

    #[test]
    fn poisson_1d_examples() {
        let g = Grid::new_1d(64, 2.0 * PI).unwrap();
        let z = ScalarField::zeros(&g);
        let m = ScalarField::from_fn(&g, |x| x[0].cos());
        let eta = ScalarField::constant(&g, 1.3);
        let (a, b) = poisson_apply_1d(&m, &eta, &z, &z).unwrap();
        assert!(a.max_abs() < 1e-14 && b.max_abs() < 1e-14);

        let h = 2.5;
        let eta = ScalarField::constant(&g, h);
        let b = ScalarField::from_fn(&g, |x| x[0].sin());
        let (first, second) = poisson_apply_1d(&z, &eta, &z, &b).unwrap();
        let expected = ScalarField::from_fn(&g, |x| -h * x[0].cos());
        assert!(first.max_diff(&expected) < 1e-12);
        assert!(second.max_abs() < 1e-14);

        let other = Grid::new_1d(32, 2.0 * PI).unwrap();
        assert_eq!(
            poisson_apply_1d(&ScalarField::zeros(&other), &eta, &z, &b),
            Err(Error::GridMismatch)
        );
    }

    fn bilinear_1d(a: &ScalarField, b: &ScalarField, j: &(ScalarField, ScalarField)) -> f64 {
        a.inner(&j.0) + b.inner(&j.1)
    }

    #[test]
    fn poisson_1d_is_skew_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = Grid::new_1d(128, 7.0).unwrap();
        for _ in 0..20 {
            let m = random_smooth(&g, 6, &mut rng);
            let eta = &ScalarField::constant(&g, 1.0) + &random_smooth(&g, 6, &mut rng).scale(0.3);
            let fields: Vec<ScalarField> = (0..4).map(|_| random_smooth(&g, 6, &mut rng)).collect();
            let jcd = poisson_apply_1d(&m, &eta, &fields[2], &fields[3]).unwrap();
            let jab = poisson_apply_1d(&m, &eta, &fields[0], &fields[1]).unwrap();
            let lhs = bilinear_1d(&fields[0], &fields[1], &jcd);
            let rhs = bilinear_1d(&fields[2], &fields[3], &jab);
            assert!((lhs + rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn poisson_nd_zero_and_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let g = Grid::new_2d(32, 32, 4.0, 5.0).unwrap();
        let vec = |rng: &mut ChaCha8Rng| {
            VectorField::new(vec![random_smooth(&g, 4, rng), random_smooth(&g, 4, rng)]).unwrap()
        };
        let m = vec(&mut rng);
        let eta = &ScalarField::constant(&g, 1.0) + &random_smooth(&g, 4, &mut rng).scale(0.2);
        let (zm, ze) =
            poisson_apply_nd(&m, &eta, &VectorField::zeros(&g), &ScalarField::zeros(&g)).unwrap();
        assert!(zm.max_abs() < 1e-14 && ze.max_abs() < 1e-14);

        for _ in 0..10 {
            let (a, c) = (vec(&mut rng), vec(&mut rng));
            let (b, dd) = (
                random_smooth(&g, 4, &mut rng),
                random_smooth(&g, 4, &mut rng),
            );
            let jcd = poisson_apply_nd(&m, &eta, &c, &dd).unwrap();
            let jab = poisson_apply_nd(&m, &eta, &a, &b).unwrap();
            let lhs = a.inner(&jcd.0) + b.inner(&jcd.1);
            let rhs = c.inner(&jab.0) + dd.inner(&jab.1);
            assert!((lhs + rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn poisson_nd_reduces_to_1d_on_x_slices() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (nx, ny, lx) = (64, 8, 6.0);
        let line = Grid::new_1d(nx, lx).unwrap();
        let plane = Grid::new_2d(nx, ny, lx, 2.0).unwrap();
        let lift = |f: &ScalarField| {
            ScalarField::from_fn(&plane, |x| {
                let i = (x[0] / lx * nx as f64).round() as usize % nx;
                f.values()[i]
            })
        };
        let m1 = random_smooth(&line, 5, &mut rng);
        let eta1 =
            &ScalarField::constant(&line, 1.0) + &random_smooth(&line, 5, &mut rng).scale(0.3);
        let a1 = random_smooth(&line, 5, &mut rng);
        let b1 = random_smooth(&line, 5, &mut rng);
        let (f1, s1) = poisson_apply_1d(&m1, &eta1, &a1, &b1).unwrap();

        let zero = ScalarField::zeros(&plane);
        let m2 = VectorField::new(vec![lift(&m1), zero.clone()]).unwrap();
        let a2 = VectorField::new(vec![lift(&a1), zero.clone()]).unwrap();
        let (f2, s2) = poisson_apply_nd(&m2, &lift(&eta1), &a2, &lift(&b1)).unwrap();
        assert!(f2.component(0).max_diff(&lift(&f1)) < 1e-12);
        assert!(f2.component(1).max_abs() < 1e-12);
        assert!(s2.max_diff(&lift(&s1)) < 1e-12);
    }
}
