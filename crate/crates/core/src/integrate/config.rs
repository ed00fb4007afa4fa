use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::OperatorParams;
use crate::spectral::Grid;

/// Which equations a run evolves, and in which variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Shallow water in `(u, η)`.
    SwPrimitive,
    /// Shallow water in `(m = ηu, η)` through the Poisson operator.
    SwMomentum,
    /// EPDiff in advective form; the 1-D equation on a 1-D grid.
    EpdiffAdvective,
    /// EPDiff in curl form, 2-D only.
    EpdiffCurl,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::SwPrimitive,
        ModelKind::SwMomentum,
        ModelKind::EpdiffAdvective,
        ModelKind::EpdiffCurl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::SwPrimitive => "sw_primitive",
            ModelKind::SwMomentum => "sw_momentum",
            ModelKind::EpdiffAdvective => "epdiff_advective",
            ModelKind::EpdiffCurl => "epdiff_curl",
        }
    }

    pub fn is_shallow_water(self) -> bool {
        matches!(self, ModelKind::SwPrimitive | ModelKind::SwMomentum)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model {s:?}")))
    }
}

/// Initial condition. Shallow-water runs have mean depth 1; EPDiff runs
/// prescribe the velocity and set `m = L^ν u`.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// 1-D EPDiff only: the periodic peakon of speed `amplitude`. `width`
    /// must equal the operator length scale and `nu` must be 1.
    Peakon {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    /// Gaussian bump of the surface (shallow water) or of `u₁` (EPDiff).
    Gaussian {
        amplitude: f64,
        width: f64,
        center: Vec<f64>,
    },
    /// Seeded Fourier modes with `|index| <= 4` in every field, scaled to
    /// max-norm `amplitude`.
    RandomSmooth { amplitude: f64 },
}

impl InitialCondition {
    pub fn name(&self) -> &'static str {
        match self {
            InitialCondition::Peakon { .. } => "peakon",
            InitialCondition::Gaussian { .. } => "gaussian",
            InitialCondition::RandomSmooth { .. } => "random_smooth",
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            InitialCondition::Peakon { amplitude, .. }
            | InitialCondition::Gaussian { amplitude, .. }
            | InitialCondition::RandomSmooth { amplitude } => amplitude,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    /// Points per axis; the length gives the dimension.
    pub sizes: Vec<usize>,
    pub lengths: Vec<f64>,
    /// Operator length scale and power, required by the EPDiff models.
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
    pub g: f64,
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    pub ic: InitialCondition,
    pub seed: u64,
    pub dealias: bool,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub const DEFAULT_G: f64 = 9.81;

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn grid(&self) -> Result<Grid> {
        if self.lengths.len() != self.sizes.len() {
            return Err(Error::InvalidGrid(
                "sizes and lengths differ in dimension".into(),
            ));
        }
        Grid::new(self.dim(), &self.sizes, &self.lengths)
    }

    /// The operator of an EPDiff run; `None` for shallow water.
    pub fn operator(&self) -> Result<Option<OperatorParams>> {
        if self.model.is_shallow_water() {
            return Ok(None);
        }
        match (self.alpha, self.nu) {
            (Some(alpha), Some(nu)) => OperatorParams::new(alpha, nu, self.dim()).map(Some),
            _ => Err(Error::InvalidParameter(format!(
                "{} needs alpha and nu",
                self.model
            ))),
        }
    }

    /// Number of RK4 steps; the last one is shortened to land on `t_end`.
    pub fn step_count(&self) -> usize {
        let ratio = self.t_end / self.dt;
        // Tolerate ratios like 2 / 0.002 that land just above an integer.
        (ratio - 1e-9 * ratio.max(1.0)).ceil().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        self.grid()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if self.output_every == 0 {
            return bad("output_every must be at least 1".into());
        }
        if self.model.is_shallow_water() && !(self.g.is_finite() && self.g > 0.0) {
            return bad(format!("g must be positive, got {}", self.g));
        }
        let op = self.operator()?;
        if self.model == ModelKind::EpdiffCurl && self.dim() != 2 {
            return bad("epdiff_curl needs a 2-D grid".into());
        }
        if !self.ic.amplitude().is_finite() {
            return bad("ic_amplitude must be finite".into());
        }
        match &self.ic {
            InitialCondition::Peakon { width, center, .. } => {
                let Some(op) = op else {
                    return bad("the peakon initial condition needs an EPDiff model".into());
                };
                if self.dim() != 1 {
                    return bad("the peakon initial condition needs a 1-D grid".into());
                }
                if op.nu != 1.0 {
                    return bad(format!("the peakon needs nu = 1, got {}", op.nu));
                }
                if *width != op.alpha {
                    return bad(format!(
                        "peakon width {width} must equal alpha {}",
                        op.alpha
                    ));
                }
                if !center.is_finite() {
                    return bad("ic_center_x must be finite".into());
                }
            }
            InitialCondition::Gaussian { width, center, .. } => {
                if !(width.is_finite() && *width > 0.0) {
                    return bad(format!("ic_width must be positive, got {width}"));
                }
                if center.len() != self.dim() || !center.iter().all(|c| c.is_finite()) {
                    return bad("the gaussian centre needs one finite coordinate per axis".into());
                }
            }
            InitialCondition::RandomSmooth { .. } => {}
        }
        Ok(())
    }
}
