use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    epdiff_hamiltonian, epdiff_recover_u, epdiff_rhs_1d, epdiff_rhs_advective, epdiff_rhs_curl,
    sw_hamiltonian, sw_rhs_momentum, sw_rhs_primitive, EPDiffState, Products, SWState, Tendency,
};
use crate::error::{Error, Result};
use crate::operators::apply_l;
use crate::spectral::{dealias, random_smooth, Grid, ScalarField, VectorField};

use super::config::{InitialCondition, ModelKind, RunConfig};
use super::diagnostics::{ConservationSummary, DiagnosticsRecord, Snapshot};
use super::initial::{gaussian_bump, peakon_ic};
use super::rk4::{rk4_step, Evolvable};

/// Receives diagnostics and snapshots as a run produces them.
pub trait RunObserver {
    fn record(&mut self, record: &DiagnosticsRecord);
    fn snapshot(&mut self, snapshot: &Snapshot);
}

/// Observer that keeps everything in memory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Collect {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl RunObserver for Collect {
    fn record(&mut self, record: &DiagnosticsRecord) {
        self.records.push(record.clone());
    }

    fn snapshot(&mut self, snapshot: &Snapshot) {
        self.snapshots.push(snapshot.clone());
    }
}

pub type RunOutput = Collect;

/// Runs `config` and collects the whole output in memory.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let mut out = Collect::default();
    run_with(config, &mut out)?;
    Ok(out)
}

/// Runs `config`, reporting at step 0, every `output_every` steps and at the
/// final step.
///
/// Snapshot fields, per model:
///
/// * shallow water: `u` (or `u_x, u_y`), `eta`, `m` (or `m_x, m_y`);
/// * EPDiff: `m` (or `m_x, m_y`), `u` (or `u_x, u_y`).
///
/// A non-finite state aborts with [`Error::NonFiniteState`]; any error raised
/// while stepping is wrapped in [`Error::Aborted`] with the failing step.
pub fn run_with(
    config: &RunConfig,
    observer: &mut impl RunObserver,
) -> Result<ConservationSummary> {
    config.validate()?;
    let grid = config.grid()?;
    let products = Products::from_flag(config.dealias);
    match config.model {
        ModelKind::SwPrimitive => {
            let s = sw_initial(config, &grid)?;
            drive(config, &SwPrimitive { products }, s, observer)
        }
        ModelKind::SwMomentum => {
            let s = sw_initial(config, &grid)?;
            let state = Momentum {
                m: s.momentum(),
                eta: s.eta,
                g: s.g,
            };
            drive(config, &SwMomentum { products }, state, observer)
        }
        ModelKind::EpdiffAdvective | ModelKind::EpdiffCurl => {
            let s = epdiff_initial(config, &grid)?;
            let form: EPDiffForm = match (config.model, grid.dim()) {
                (ModelKind::EpdiffCurl, _) => epdiff_rhs_curl,
                (_, 1) => epdiff_rhs_1d,
                _ => epdiff_rhs_advective,
            };
            drive(config, &EPDiff { products, form }, s, observer)
        }
    }
}

/// CFL guideline for the initial state of `config`:
/// `0.5 dx / max(|u| + sqrt(g max η))` for shallow water, `0.5 dx / max|u|`
/// for EPDiff.
pub fn suggested_dt(config: &RunConfig) -> Result<f64> {
    config.validate()?;
    let grid = config.grid()?;
    let dx = grid
        .spacings()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let speed = if config.model.is_shallow_water() {
        let s = sw_initial(config, &grid)?;
        s.u.max_magnitude() + (config.g * s.eta.max()).sqrt()
    } else {
        epdiff_recover_u(&epdiff_initial(config, &grid)?)?.max_magnitude()
    };
    Ok(if speed > 0.0 {
        0.5 * dx / speed
    } else {
        f64::INFINITY
    })
}

fn drive<M: Model>(
    config: &RunConfig,
    model: &M,
    mut state: M::State,
    observer: &mut impl RunObserver,
) -> Result<ConservationSummary> {
    let limit = model.cfl_limit(&state)?;
    if config.dt > limit {
        warn!("dt = {} exceeds the CFL guideline {:.3e}", config.dt, limit);
    }
    let steps = config.step_count();
    info!(
        "{}: {} steps of {} to t = {}",
        config.model, steps, config.dt, config.t_end
    );

    let mut emit = |state: &M::State, step: usize, t: f64| -> Result<DiagnosticsRecord> {
        let record = model.diagnostics(state, step, t)?;
        observer.record(&record);
        observer.snapshot(&Snapshot {
            step,
            t,
            fields: model.fields(state)?,
        });
        Ok(record)
    };

    let initial = emit(&state, 0, 0.0)?;
    let mut last = initial.clone();
    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * config.dt;
        let t = if step == steps {
            config.t_end
        } else {
            step as f64 * config.dt
        };
        state = rk4_step(&state, |s| model.rhs(s), t - t_prev).map_err(|e| Error::Aborted {
            step,
            source: Box::new(e),
        })?;
        if !state.is_finite() {
            return Err(Error::NonFiniteState { step });
        }
        if step % config.output_every == 0 || step == steps {
            last = emit(&state, step, t).map_err(|e| Error::Aborted {
                step,
                source: Box::new(e),
            })?;
        }
    }
    Ok(ConservationSummary { initial, last })
}

fn sw_initial(config: &RunConfig, grid: &Grid) -> Result<SWState> {
    let dim = grid.dim();
    let (u, eta) = match &config.ic {
        InitialCondition::Gaussian {
            amplitude,
            width,
            center,
        } => (
            VectorField::zeros(grid),
            gaussian_bump(grid, *amplitude, *width, center).map(|v| 1.0 + v),
        ),
        InitialCondition::RandomSmooth { amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let u = (0..dim)
                .map(|_| random_smooth(grid, 4, &mut rng).scale(*amplitude))
                .collect();
            let eta = random_smooth(grid, 4, &mut rng)
                .scale(*amplitude)
                .map(|v| 1.0 + v);
            (VectorField::new(u)?, eta)
        }
        InitialCondition::Peakon { .. } => {
            return Err(Error::InvalidParameter(
                "the peakon initial condition needs an EPDiff model".into(),
            ))
        }
    };
    let (u, eta) = if config.dealias {
        (u.map_components(dealias), dealias(&eta))
    } else {
        (u, eta)
    };
    SWState::new(u, eta, config.g)
}

fn epdiff_initial(config: &RunConfig, grid: &Grid) -> Result<EPDiffState> {
    let op = config
        .operator()?
        .ok_or_else(|| Error::InvalidParameter("EPDiff model needs an operator".into()))?;
    let dim = grid.dim();
    let state = match &config.ic {
        InitialCondition::Peakon {
            amplitude,
            width,
            center,
        } => peakon_ic(grid, *amplitude, *width, *center)?,
        InitialCondition::Gaussian {
            amplitude,
            width,
            center,
        } => {
            let mut u = vec![gaussian_bump(grid, *amplitude, *width, center)];
            u.extend((1..dim).map(|_| ScalarField::zeros(grid)));
            EPDiffState::new(apply_l(&VectorField::new(u)?, &op)?, op)?
        }
        InitialCondition::RandomSmooth { amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let u = (0..dim)
                .map(|_| random_smooth(grid, 4, &mut rng).scale(*amplitude))
                .collect();
            EPDiffState::new(apply_l(&VectorField::new(u)?, &op)?, op)?
        }
    };
    Ok(if config.dealias {
        EPDiffState {
            m: state.m.map_components(dealias),
            op: state.op,
        }
    } else {
        state
    })
}

/// Shallow-water state in Hamiltonian variables.
#[derive(Clone, Debug)]
struct Momentum {
    m: VectorField,
    eta: ScalarField,
    g: f64,
}

impl Evolvable for SWState {
    type Rate = Tendency;

    fn advance(&self, h: f64, rate: &Tendency) -> Self {
        let deta = rate.scalar.as_ref().expect("shallow-water tendency");
        SWState {
            u: self.u.axpy(h, &rate.vector),
            eta: self.eta.axpy(h, deta),
            g: self.g,
        }
    }

    fn is_finite(&self) -> bool {
        self.u.is_finite() && self.eta.is_finite()
    }
}

impl Evolvable for Momentum {
    type Rate = Tendency;

    fn advance(&self, h: f64, rate: &Tendency) -> Self {
        let deta = rate.scalar.as_ref().expect("shallow-water tendency");
        Momentum {
            m: self.m.axpy(h, &rate.vector),
            eta: self.eta.axpy(h, deta),
            g: self.g,
        }
    }

    fn is_finite(&self) -> bool {
        self.m.is_finite() && self.eta.is_finite()
    }
}

impl Evolvable for EPDiffState {
    type Rate = Tendency;

    fn advance(&self, h: f64, rate: &Tendency) -> Self {
        EPDiffState {
            m: self.m.axpy(h, &rate.vector),
            op: self.op,
        }
    }

    fn is_finite(&self) -> bool {
        self.m.is_finite()
    }
}

trait Model {
    type State: Evolvable<Rate = Tendency>;

    fn rhs(&self, s: &Self::State) -> Result<Tendency>;
    fn diagnostics(&self, s: &Self::State, step: usize, t: f64) -> Result<DiagnosticsRecord>;
    fn fields(&self, s: &Self::State) -> Result<Vec<(&'static str, ScalarField)>>;
    fn cfl_limit(&self, s: &Self::State) -> Result<f64>;
}

struct SwPrimitive {
    products: Products,
}

struct SwMomentum {
    products: Products,
}

type EPDiffForm = fn(&EPDiffState, Products) -> Result<Tendency>;

struct EPDiff {
    products: Products,
    form: EPDiffForm,
}

fn vector_names(prefix: &'static str, dim: usize) -> Vec<&'static str> {
    match (prefix, dim) {
        ("u", 1) => vec!["u"],
        ("u", _) => vec!["u_x", "u_y"],
        ("m", 1) => vec!["m"],
        _ => vec!["m_x", "m_y"],
    }
}

fn named(prefix: &'static str, v: &VectorField) -> Vec<(&'static str, ScalarField)> {
    vector_names(prefix, v.dim())
        .into_iter()
        .zip(v.components().iter().cloned())
        .collect()
}

fn sw_record(
    u: &VectorField,
    m: &VectorField,
    eta: &ScalarField,
    g: f64,
    step: usize,
    t: f64,
) -> Result<DiagnosticsRecord> {
    Ok(DiagnosticsRecord {
        step,
        t,
        hamiltonian: sw_hamiltonian(m, eta, g)?,
        mass: Some(eta.integral()),
        momentum: m.components().iter().map(ScalarField::integral).collect(),
        max_speed: u.max_magnitude(),
        l2_m: m.inner(m).sqrt(),
    })
}

fn sw_cfl(u: &VectorField, eta: &ScalarField, g: f64) -> f64 {
    let dx = u
        .grid()
        .spacings()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    0.5 * dx / (u.max_magnitude() + (g * eta.max().max(0.0)).sqrt())
}

impl Model for SwPrimitive {
    type State = SWState;

    fn rhs(&self, s: &SWState) -> Result<Tendency> {
        sw_rhs_primitive(s, self.products)
    }

    fn diagnostics(&self, s: &SWState, step: usize, t: f64) -> Result<DiagnosticsRecord> {
        sw_record(&s.u, &s.momentum(), &s.eta, s.g, step, t)
    }

    fn fields(&self, s: &SWState) -> Result<Vec<(&'static str, ScalarField)>> {
        let mut out = named("u", &s.u);
        out.push(("eta", s.eta.clone()));
        out.extend(named("m", &s.momentum()));
        Ok(out)
    }

    fn cfl_limit(&self, s: &SWState) -> Result<f64> {
        Ok(sw_cfl(&s.u, &s.eta, s.g))
    }
}

impl Momentum {
    fn velocity(&self) -> VectorField {
        self.m
            .map_components(|c| c.zip_with(&self.eta, |a, h| a / h))
    }
}

impl Model for SwMomentum {
    type State = Momentum;

    fn rhs(&self, s: &Momentum) -> Result<Tendency> {
        sw_rhs_momentum(&s.m, &s.eta, s.g, self.products)
    }

    fn diagnostics(&self, s: &Momentum, step: usize, t: f64) -> Result<DiagnosticsRecord> {
        sw_record(&s.velocity(), &s.m, &s.eta, s.g, step, t)
    }

    fn fields(&self, s: &Momentum) -> Result<Vec<(&'static str, ScalarField)>> {
        let mut out = named("u", &s.velocity());
        out.push(("eta", s.eta.clone()));
        out.extend(named("m", &s.m));
        Ok(out)
    }

    fn cfl_limit(&self, s: &Momentum) -> Result<f64> {
        Ok(sw_cfl(&s.velocity(), &s.eta, s.g))
    }
}

impl Model for EPDiff {
    type State = EPDiffState;

    fn rhs(&self, s: &EPDiffState) -> Result<Tendency> {
        (self.form)(s, self.products)
    }

    fn diagnostics(&self, s: &EPDiffState, step: usize, t: f64) -> Result<DiagnosticsRecord> {
        let u = epdiff_recover_u(s)?;
        Ok(DiagnosticsRecord {
            step,
            t,
            hamiltonian: epdiff_hamiltonian(s)?,
            mass: None,
            momentum: s.m.components().iter().map(ScalarField::integral).collect(),
            max_speed: u.max_magnitude(),
            l2_m: s.m.inner(&s.m).sqrt(),
        })
    }

    fn fields(&self, s: &EPDiffState) -> Result<Vec<(&'static str, ScalarField)>> {
        let mut out = named("m", &s.m);
        out.extend(named("u", &epdiff_recover_u(s)?));
        Ok(out)
    }

    fn cfl_limit(&self, s: &EPDiffState) -> Result<f64> {
        let u = epdiff_recover_u(s)?;
        let dx = u
            .grid()
            .spacings()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let speed = u.max_magnitude();
        Ok(if speed > 0.0 {
            0.5 * dx / speed
        } else {
            f64::INFINITY
        })
    }
}
