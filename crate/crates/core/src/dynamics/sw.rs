use crate::error::{Error, Result};
use crate::operators::poisson_apply_nd;
use crate::spectral::{gradient, ScalarField, VectorField};

use super::{Products, Tendency};

/// Smallest admissible free-surface displacement; the Hamiltonian form divides by η.
pub const ETA_FLOOR: f64 = 1e-8;

/// Shallow-water state in primitive variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SWState {
    pub u: VectorField,
    pub eta: ScalarField,
    pub g: f64,
}

impl SWState {
    pub fn new(u: VectorField, eta: ScalarField, g: f64) -> Result<Self> {
        if u.grid() != eta.grid() {
            return Err(Error::GridMismatch);
        }
        check_depth(&eta)?;
        Ok(Self { u, eta, g })
    }

    /// Hamiltonian momentum `m = ηu`.
    pub fn momentum(&self) -> VectorField {
        self.u.mul_scalar(&self.eta)
    }
}

/// Fails if `min(η) <= ETA_FLOOR`.
pub fn check_depth(eta: &ScalarField) -> Result<()> {
    let (index, min) =
        eta.values()
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, v)| if v < best.1 { (i, v) } else { best },
            );
    if min <= ETA_FLOOR {
        return Err(Error::DepthBelowFloor {
            min,
            index,
            floor: ETA_FLOOR,
        });
    }
    Ok(())
}

/// `(u̇, η̇) = (-(u·∇)u - g∇η, -∇·(ηu))`.
#[allow(clippy::needless_range_loop)]
pub fn sw_rhs_primitive(s: &SWState, products: Products) -> Result<Tendency> {
    check_depth(&s.eta)?;
    let dim = s.u.dim();
    let grad_u: Vec<Vec<ScalarField>> = s.u.components().iter().map(gradient).collect();
    let grad_eta = gradient(&s.eta);
    let mut du = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc = grad_eta[i].scale(s.g);
        for j in 0..dim {
            acc = &acc + &products.product(s.u.component(j), &grad_u[i][j]);
        }
        du.push(-&acc);
    }
    let mut deta = ScalarField::zeros(s.eta.grid());
    for j in 0..dim {
        let flux = products.product(&s.eta, s.u.component(j));
        deta = &deta - &gradient_axis(&flux, j);
    }
    Ok(Tendency {
        vector: VectorField::from_raw(du),
        scalar: Some(deta),
    })
}

fn gradient_axis(f: &ScalarField, axis: usize) -> ScalarField {
    crate::spectral::deriv(f, axis).expect("axis < dim")
}

/// `(δH/δm, δH/δη) = (m/η, -|m|²/(2η²) + gη)`.
pub fn sw_var_derivatives(
    m: &VectorField,
    eta: &ScalarField,
    g: f64,
) -> Result<(VectorField, ScalarField)> {
    if m.grid() != eta.grid() {
        return Err(Error::GridMismatch);
    }
    check_depth(eta)?;
    let u = m.map_components(|c| c.zip_with(eta, |a, h| a / h));
    let m_sq = m.dot(m);
    let b = m_sq.zip_with(eta, |q, h| -q / (2.0 * h * h) + g * h);
    Ok((u, b))
}

/// `H = ∫ ½ |m|²/η + ½ g η²`.
pub fn sw_hamiltonian(m: &VectorField, eta: &ScalarField, g: f64) -> Result<f64> {
    if m.grid() != eta.grid() {
        return Err(Error::GridMismatch);
    }
    check_depth(eta)?;
    let m_sq = m.dot(m);
    let density = m_sq.zip_with(eta, |q, h| 0.5 * q / h + 0.5 * g * h * h);
    Ok(density.integral())
}

/// Hamiltonian form: the Poisson operator applied to the variational
/// derivatives, which works out to `(-∂_j(m_i u_j) - gη∂_iη, -∂_j(η u_j))`.
///
/// With [`Products::Dealiased`] the tendency is truncated with the 2/3 rule
/// after the Poisson application; the operator itself is applied to exact
/// pointwise products so that it stays skew-adjoint on the grid.
pub fn sw_rhs_momentum(
    m: &VectorField,
    eta: &ScalarField,
    g: f64,
    products: Products,
) -> Result<Tendency> {
    let (a, b) = sw_var_derivatives(m, eta, g)?;
    let (dm, deta) = poisson_apply_nd(m, eta, &a, &b)?;
    Ok(Tendency {
        vector: dm.map_components(|c| products.apply(c.clone())),
        scalar: Some(products.apply(deta)),
    })
}
