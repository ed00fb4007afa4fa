//! Tendencies for the four model forms, the Hamiltonians and the variational
//! derivatives.
//!
//! Shallow water is evolved either in primitive variables `(u, η)` or in
//! Hamiltonian variables `(m = ηu, η)`. EPDiff is evolved in `m`, with the
//! velocity recovered as `u = L^{-ν} m` on every call.

mod epdiff;
mod sw;

pub use epdiff::{
    epdiff_hamiltonian, epdiff_recover_u, epdiff_rhs_1d, epdiff_rhs_advective, epdiff_rhs_curl,
    EPDiffState,
};
pub use sw::{
    check_depth, sw_hamiltonian, sw_rhs_momentum, sw_rhs_primitive, sw_var_derivatives, SWState,
    ETA_FLOOR,
};

use crate::spectral::{dealias, ScalarField, VectorField};

/// How quadratic products are formed before they are differentiated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Products {
    /// Pointwise product truncated with the 2/3 rule.
    #[default]
    Dealiased,
    /// Plain pointwise product.
    Pointwise,
}

impl Products {
    pub fn from_flag(dealias: bool) -> Self {
        if dealias {
            Products::Dealiased
        } else {
            Products::Pointwise
        }
    }

    pub(crate) fn apply(self, f: ScalarField) -> ScalarField {
        match self {
            Products::Dealiased => dealias(&f),
            Products::Pointwise => f,
        }
    }

    pub(crate) fn product(self, a: &ScalarField, b: &ScalarField) -> ScalarField {
        self.apply(a * b)
    }
}

/// Time derivative of a model state: the vector part (`u̇` or `ṁ`) and, for
/// shallow water, the free-surface part `η̇`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tendency {
    pub vector: VectorField,
    pub scalar: Option<ScalarField>,
}

impl Tendency {
    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let scalar = match (&self.scalar, &other.scalar) {
            (Some(x), Some(y)) => Some(x.axpy(a, y)),
            (None, None) => None,
            _ => panic!("tendencies of different model forms"),
        };
        Self {
            vector: self.vector.axpy(a, &other.vector),
            scalar,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.vector.is_finite() && self.scalar.as_ref().is_none_or(ScalarField::is_finite)
    }

    /// Max-norm distance over every field.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let s = match (&self.scalar, &other.scalar) {
            (Some(x), Some(y)) => x.max_diff(y),
            _ => 0.0,
        };
        self.vector.max_diff(&other.vector).max(s)
    }

    pub fn max_abs(&self) -> f64 {
        self.vector
            .max_abs()
            .max(self.scalar.as_ref().map_or(0.0, ScalarField::max_abs))
    }

    pub fn shift(&self, axis: usize, cells: isize) -> Self {
        Self {
            vector: self.vector.shift(axis, cells),
            scalar: self.scalar.as_ref().map(|s| s.shift(axis, cells)),
        }
    }
}
