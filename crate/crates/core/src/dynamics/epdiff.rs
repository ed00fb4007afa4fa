use crate::error::{Error, Result};
use crate::operators::{apply_l_inv, curl_embedded, div, OperatorParams};
use crate::spectral::{deriv, gradient, ScalarField, VectorField};

use super::{Products, Tendency};

/// EPDiff state: momentum `m` and the operator that links it to `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct EPDiffState {
    pub m: VectorField,
    pub op: OperatorParams,
}

impl EPDiffState {
    pub fn new(m: VectorField, op: OperatorParams) -> Result<Self> {
        check_dim(&m, op.dim)?;
        Ok(Self { m, op })
    }
}

fn check_dim(m: &VectorField, expected: usize) -> Result<()> {
    if m.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: m.dim(),
        });
    }
    Ok(())
}

/// `u = L^{-ν} m`.
pub fn epdiff_recover_u(s: &EPDiffState) -> Result<VectorField> {
    apply_l_inv(&s.m, &s.op)
}

/// `ṁ = -(mu)_x - m u_x`.
pub fn epdiff_rhs_1d(s: &EPDiffState, products: Products) -> Result<Tendency> {
    check_dim(&s.m, 1)?;
    let u = epdiff_recover_u(s)?;
    let (m, u) = (s.m.component(0), u.component(0));
    let flux = deriv(&products.product(m, u), 0)?;
    let stretch = products.product(m, &deriv(u, 0)?);
    Ok(Tendency {
        vector: VectorField::from_raw(vec![-&(&flux + &stretch)]),
        scalar: None,
    })
}

/// `ṁ = -[(∇u)^T m + (u·∇)m + m(∇·u)]`, valid in any dimension.
pub fn epdiff_rhs_advective(s: &EPDiffState, products: Products) -> Result<Tendency> {
    check_dim(&s.m, s.op.dim)?;
    let u = epdiff_recover_u(s)?;
    let dim = s.m.dim();
    let grad_u: Vec<Vec<ScalarField>> = u.components().iter().map(gradient).collect();
    let grad_m: Vec<Vec<ScalarField>> = s.m.components().iter().map(gradient).collect();
    let div_u = div(&u);
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc = products.product(s.m.component(i), &div_u);
        for j in 0..dim {
            acc = &acc + &products.product(s.m.component(j), &grad_u[j][i]);
            acc = &acc + &products.product(u.component(j), &grad_m[i][j]);
        }
        out.push(-&acc);
    }
    Ok(Tendency {
        vector: VectorField::from_raw(out),
        scalar: None,
    })
}

/// Curl form in the plane: `ṁ = u × curl m - ∇(u·m) - m(∇·u)`, with
/// `u × curl m = (u₂ω, -u₁ω)` and `ω = ∂₁m₂ - ∂₂m₁`.
pub fn epdiff_rhs_curl(s: &EPDiffState, products: Products) -> Result<Tendency> {
    check_dim(&s.m, 2)?;
    let u = epdiff_recover_u(s)?;
    let omega = curl_embedded(&s.m)?;
    let (u1, u2) = (u.component(0), u.component(1));
    let um = products.apply(u.dot(&s.m));
    let grad_um = gradient(&um);
    let div_u = div(&u);
    let out = (0..2)
        .map(|i| {
            let rot = match i {
                0 => products.product(u2, &omega),
                _ => -&products.product(u1, &omega),
            };
            let stretch = products.product(s.m.component(i), &div_u);
            &(&rot - &grad_um[i]) - &stretch
        })
        .collect();
    Ok(Tendency {
        vector: VectorField::from_raw(out),
        scalar: None,
    })
}

/// `H = ½ ∫ m·u`.
pub fn epdiff_hamiltonian(s: &EPDiffState) -> Result<f64> {
    let u = epdiff_recover_u(s)?;
    Ok(0.5 * s.m.inner(&u))
}
