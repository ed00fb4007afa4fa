//! Closed-form Green's function of the Yukawa operator and the special
//! functions it needs.
//!
//! The scalar kernel is
//!
//! ```text
//! G(r) = 2^{n/2-ν} / ((2πα)^{n/2} α^ν Γ(ν)) · r^{ν-n/2} · K_{ν-n/2}(r/α)
//! ```
//!
//! The spectral inverse in [`crate::operators`] is the canonical kernel; the
//! closed form is validated against it rather than trusted for normalisation.

mod kernel;
mod special;

pub use kernel::{
    green_convolve, green_scalar, green_validate, spectral_kernel, GreenParams, ValidationReport,
    IMAGE_TOLERANCE,
};
pub use special::{bessel_k, gamma_fn, BESSEL_MAX_ORDER, BESSEL_MAX_Z, BESSEL_MIN_Z};
