//! Fixed-step RK4 time integration, initial conditions and run orchestration.
//!
//! A run advances one of four model forms from a configured initial
//! condition and reports conserved quantities through a [`RunObserver`].

mod config;
mod diagnostics;
mod initial;
mod rk4;
mod run;

pub use config::{InitialCondition, ModelKind, RunConfig};
pub use diagnostics::{ConservationSummary, DiagnosticsRecord, Snapshot};
pub use initial::{gaussian_bump, peakon_ic, peakon_profile};
pub use rk4::{rk4_step, Evolvable, Rate};
pub use run::{run, run_with, suggested_dt, Collect, RunObserver, RunOutput};
