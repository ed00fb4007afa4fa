use crate::dynamics::Tendency;
use crate::error::{Error, Result};

/// A time derivative that can be linearly combined.
pub trait Rate {
    /// `self + a * other`.
    fn axpy(&self, a: f64, other: &Self) -> Self;
}

/// A state that can be advanced along a rate.
pub trait Evolvable: Clone {
    type Rate: Rate;

    /// `self + h * rate`.
    fn advance(&self, h: f64, rate: &Self::Rate) -> Self;

    fn is_finite(&self) -> bool;
}

impl Rate for f64 {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self + a * other
    }
}

impl Evolvable for f64 {
    type Rate = f64;

    fn advance(&self, h: f64, rate: &f64) -> Self {
        self + h * rate
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Rate for Tendency {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        Tendency::axpy(self, a, other)
    }
}

/// One classical fourth-order Runge-Kutta step. Finiteness of the result is
/// left to the caller, which knows the step index.
pub fn rk4_step<S, F>(state: &S, mut rhs: F, dt: f64) -> Result<S>
where
    S: Evolvable,
    F: FnMut(&S) -> Result<S::Rate>,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let k1 = rhs(state)?;
    let k2 = rhs(&state.advance(0.5 * dt, &k1))?;
    let k3 = rhs(&state.advance(0.5 * dt, &k2))?;
    let k4 = rhs(&state.advance(dt, &k3))?;
    let sum = k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4);
    Ok(state.advance(dt / 6.0, &sum))
}
