//! Flat `key = value` run configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Defaults: `g = 9.81`, `dealias = true`, `seed = 0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use epdiff_core::integrate::{InitialCondition, ModelKind, RunConfig};
use log::warn;
use thiserror::Error;

/// Environment variable that replaces `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "EPDIFF_OUTPUT_DIR";

pub const KEYS: [&str; 20] = [
    "model",
    "dim",
    "nx",
    "ny",
    "lx",
    "ly",
    "alpha",
    "nu",
    "g",
    "dt",
    "t_end",
    "output_every",
    "ic",
    "ic_amplitude",
    "ic_width",
    "ic_center_x",
    "ic_center_y",
    "seed",
    "dealias",
    "output_dir",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: key {key:?} is set twice")]
    Duplicate { key: String, line: usize },

    #[error("missing required key {key:?}")]
    MissingKey { key: &'static str },

    #[error("line {line}: cannot parse {value:?} for {key:?}: expected {expected}")]
    Parse {
        key: &'static str,
        line: usize,
        value: String,
        expected: &'static str,
    },

    #[error("line {line}: invalid value for {key:?}: {reason}")]
    Invalid {
        key: &'static str,
        line: usize,
        reason: String,
    },

    #[error("inconsistent configuration: {0}")]
    Inconsistent(#[from] epdiff_core::Error),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

struct Entries {
    values: BTreeMap<&'static str, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: raw.to_string(),
                });
            };
            let key = key.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(ConfigError::UnknownKey {
                    key: key.to_string(),
                    line,
                });
            };
            if values
                .insert(known, (line, value.trim().to_string()))
                .is_some()
            {
                return Err(ConfigError::Duplicate {
                    key: key.to_string(),
                    line,
                });
            }
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &'static str) -> Option<&(usize, String)> {
        self.values.get(key)
    }

    fn line(&self, key: &'static str) -> usize {
        self.raw(key).map_or(0, |(l, _)| *l)
    }

    fn get<T: FromStr>(
        &self,
        key: &'static str,
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        self.raw(key)
            .map(|(line, value)| {
                value.parse().map_err(|_| ConfigError::Parse {
                    key,
                    line: *line,
                    value: value.clone(),
                    expected,
                })
            })
            .transpose()
    }

    fn require<T: FromStr>(
        &self,
        key: &'static str,
        expected: &'static str,
    ) -> Result<T, ConfigError> {
        self.get(key, expected)?
            .ok_or(ConfigError::MissingKey { key })
    }

    fn real(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.get(key, "a decimal number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.invalid(key, "must be finite")),
            _ => Ok(v),
        }
    }

    fn require_real(&self, key: &'static str) -> Result<f64, ConfigError> {
        self.real(key)?.ok_or(ConfigError::MissingKey { key })
    }

    fn invalid(&self, key: &'static str, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            key,
            line: self.line(key),
            reason: reason.into(),
        }
    }

    fn unused(&self, key: &'static str, why: &str) {
        if let Some((line, _)) = self.raw(key) {
            warn!("line {line}: {key} is ignored {why}");
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, None)
}

/// As [`parse_config`], with `output_dir` replaced by `output_dir_override`
/// when given. The key is then optional.
pub fn parse_config_with(
    text: &str,
    output_dir_override: Option<PathBuf>,
) -> Result<RunConfig, ConfigError> {
    let e = Entries::parse(text)?;

    let model: ModelKind = e.require(
        "model",
        "one of sw_primitive, sw_momentum, epdiff_advective, epdiff_curl",
    )?;
    let dim: usize = e.require("dim", "1 or 2")?;
    if !(1..=2).contains(&dim) {
        return Err(e.invalid("dim", format!("must be 1 or 2, got {dim}")));
    }
    let mut sizes = vec![e.require::<usize>("nx", "a positive integer")?];
    let mut lengths = vec![e.require_real("lx")?];
    if dim == 2 {
        sizes.push(e.require("ny", "a positive integer")?);
        lengths.push(e.require_real("ly")?);
    } else {
        e.unused("ny", "on a 1-D grid");
        e.unused("ly", "on a 1-D grid");
    }
    for (key, n) in ["nx", "ny"].into_iter().zip(&sizes) {
        if *n < 4 || n % 2 != 0 {
            return Err(e.invalid(key, format!("must be even and at least 4, got {n}")));
        }
    }
    for (key, l) in ["lx", "ly"].into_iter().zip(&lengths) {
        if *l <= 0.0 {
            return Err(e.invalid(key, format!("must be positive, got {l}")));
        }
    }

    let (alpha, nu) = (e.real("alpha")?, e.real("nu")?);
    if !model.is_shallow_water() {
        let alpha = alpha.ok_or(ConfigError::MissingKey { key: "alpha" })?;
        let nu = nu.ok_or(ConfigError::MissingKey { key: "nu" })?;
        if alpha <= 0.0 {
            return Err(e.invalid("alpha", format!("must be positive, got {alpha}")));
        }
        if nu <= 0.0 {
            return Err(e.invalid("nu", format!("must be positive, got {nu}")));
        }
    }
    let g = e.real("g")?.unwrap_or(RunConfig::DEFAULT_G);
    if model.is_shallow_water() && g <= 0.0 {
        return Err(e.invalid("g", format!("must be positive, got {g}")));
    }

    let dt = e.require_real("dt")?;
    if dt <= 0.0 {
        return Err(e.invalid("dt", format!("must be positive, got {dt}")));
    }
    let t_end = e.require_real("t_end")?;
    if t_end < 0.0 {
        return Err(e.invalid("t_end", format!("must be non-negative, got {t_end}")));
    }
    let output_every: usize = e.require("output_every", "a positive integer")?;
    if output_every == 0 {
        return Err(e.invalid("output_every", "must be at least 1"));
    }

    let ic_name: String = e.require("ic", "one of peakon, gaussian, random_smooth")?;
    let amplitude = e.require_real("ic_amplitude")?;
    let ic = match ic_name.as_str() {
        "peakon" => {
            e.unused("ic_center_y", "by the peakon");
            InitialCondition::Peakon {
                amplitude,
                width: e.require_real("ic_width")?,
                center: e.require_real("ic_center_x")?,
            }
        }
        "gaussian" => {
            let mut center = vec![e.require_real("ic_center_x")?];
            if dim == 2 {
                center.push(e.require_real("ic_center_y")?);
            }
            InitialCondition::Gaussian {
                amplitude,
                width: e.require_real("ic_width")?,
                center,
            }
        }
        "random_smooth" => {
            for key in ["ic_width", "ic_center_x", "ic_center_y"] {
                e.unused(key, "by random_smooth");
            }
            InitialCondition::RandomSmooth { amplitude }
        }
        other => {
            return Err(ConfigError::Parse {
                key: "ic",
                line: e.line("ic"),
                value: other.to_string(),
                expected: "one of peakon, gaussian, random_smooth",
            })
        }
    };

    let seed = e.get("seed", "a non-negative integer")?.unwrap_or(0);
    let dealias = e.get("dealias", "true or false")?.unwrap_or(true);
    let output_dir = match output_dir_override {
        Some(dir) => dir,
        None => PathBuf::from(e.require::<String>("output_dir", "a path")?),
    };

    let config = RunConfig {
        model,
        sizes,
        lengths,
        alpha,
        nu,
        g,
        dt,
        t_end,
        output_every,
        ic,
        seed,
        dealias,
        output_dir,
    };
    config.validate()?;
    Ok(config)
}

/// Reads a configuration file, honouring [`OUTPUT_DIR_ENV`].
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    parse_config_with(&text, dir)
}

/// Writes `config` back out as a document that [`parse_config`] accepts.
pub fn to_config_text(config: &RunConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: &dyn std::fmt::Display| {
        writeln!(out, "{key} = {value}").expect("writing to a String");
    };
    put("model", &config.model);
    put("dim", &config.dim());
    put("nx", &config.sizes[0]);
    put("lx", &config.lengths[0]);
    if config.dim() == 2 {
        put("ny", &config.sizes[1]);
        put("ly", &config.lengths[1]);
    }
    if let Some(alpha) = config.alpha {
        put("alpha", &alpha);
    }
    if let Some(nu) = config.nu {
        put("nu", &nu);
    }
    put("g", &config.g);
    put("dt", &config.dt);
    put("t_end", &config.t_end);
    put("output_every", &config.output_every);
    put("ic", &config.ic.name());
    put("ic_amplitude", &config.ic.amplitude());
    match &config.ic {
        InitialCondition::Peakon { width, center, .. } => {
            put("ic_width", width);
            put("ic_center_x", center);
        }
        InitialCondition::Gaussian { width, center, .. } => {
            put("ic_width", width);
            put("ic_center_x", &center[0]);
            if let Some(y) = center.get(1) {
                put("ic_center_y", y);
            }
        }
        InitialCondition::RandomSmooth { .. } => {}
    }
    put("seed", &config.seed);
    put("dealias", &config.dealias);
    put("output_dir", &config.output_dir.display());
    out
}
