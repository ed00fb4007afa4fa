use crate::spectral::ScalarField;

/// Conserved and monitored quantities at one output step.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    pub hamiltonian: f64,
    /// `∫η`, shallow water only.
    pub mass: Option<f64>,
    /// `∫m` per component.
    pub momentum: Vec<f64>,
    /// Largest velocity magnitude.
    pub max_speed: f64,
    /// `sqrt(∫|m|²)`.
    pub l2_m: f64,
}

/// Named fields of the state at one output step, in a fixed model-dependent
/// order (see [`crate::integrate::run_with`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub fields: Vec<(&'static str, ScalarField)>,
}

/// Drift of the conserved quantities between two records.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationSummary {
    pub initial: DiagnosticsRecord,
    pub last: DiagnosticsRecord,
}

impl ConservationSummary {
    /// `|H(t) - H(0)| / |H(0)|`.
    pub fn hamiltonian_drift(&self) -> f64 {
        relative(self.initial.hamiltonian, self.last.hamiltonian)
    }

    /// `|M(t) - M(0)| / |M(0)|` for shallow water.
    pub fn mass_drift(&self) -> Option<f64> {
        Some(relative(self.initial.mass?, self.last.mass?))
    }

    /// Largest absolute change of any momentum component.
    pub fn momentum_drift(&self) -> f64 {
        self.initial
            .momentum
            .iter()
            .zip(&self.last.momentum)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        (b - a).abs()
    } else {
        ((b - a) / a).abs()
    }
}
