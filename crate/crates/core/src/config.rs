//! Run configuration files and the built-in example presets.
//!
//! A configuration is one JSON document:
//!
//! ```json
//! {
//!   "model":  { "d1": 0.1, "d2": 0.4, "a11": 0.3, "a12": 0.5, "a22": 0.1,
//!               "mu1": 10.0, "mu2": 15.0, "h0": 2.0, "tau": 5.0,
//!               "growth":  { "kind": "beverton-holt", "m": 1.0, "a": 10.0 },
//!               "impulse": { "kind": "identity" } },
//!   "init":   { "u0": { "kind": "cos-quarter", "amplitude": 0.3 },
//!               "v0": { "kind": "cos-quarter", "amplitude": 0.1 } },
//!   "solver": { "n": 512, "steps_per_period": 2000 },
//!   "run":    { "t_end": 200.0, "snapshot_times": [0.0, 100.0, 200.0] }
//! }
//! ```
//!
//! Tabulated profiles are read from a two-column CSV file (`x,value`, optional
//! header) whose path is resolved relative to the configuration file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    validate_assumptions, GrowthFn, ImpulseFn, InitialData, ModelParams, Profile, DEFAULT_SAMPLES,
    DEFAULT_U_MAX,
};
use crate::solver::SolverConfig;

/// How an initial profile is given in a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    /// `amplitude * cos(pi x / (2 h0))` on `[-h0, h0]`.
    CosQuarter { amplitude: f64 },
    /// Samples read from a CSV file with columns `x,value`.
    Tabulated { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub u0: ProfileSpec,
    pub v0: ProfileSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    pub t_end: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub init: InitSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    pub run: RunSettings,
    /// Directory against which relative profile paths are resolved.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    /// Loads the initial profiles, reading tabulated files if needed.
    pub fn initial_data(&self) -> Result<InitialData> {
        Ok(InitialData {
            u0: self.load_profile(&self.init.u0, "init.u0")?,
            v0: self.load_profile(&self.init.v0, "init.v0")?,
        })
    }

    fn load_profile(&self, spec: &ProfileSpec, field: &str) -> Result<Profile> {
        match spec {
            ProfileSpec::CosQuarter { amplitude } => Ok(Profile::CosQuarter {
                amplitude: *amplitude,
            }),
            ProfileSpec::Tabulated { path } => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    self.base_dir.join(path)
                };
                let text = std::fs::read_to_string(&full).map_err(|e| {
                    Error::Config(format!("{field}: cannot read {}: {e}", full.display()))
                })?;
                parse_profile_table(&text)
                    .map_err(|msg| Error::Config(format!("{field}: {}: {msg}", full.display())))
            }
        }
    }

    /// Full validation: coefficient ranges, solver settings, run settings,
    /// initial data and the standing assumptions.
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.solver.validate()?;
        if !(self.run.t_end > 0.0 && self.run.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "run.t_end must be positive, got {}",
                self.run.t_end
            )));
        }
        if let Some(t) = self
            .run
            .snapshot_times
            .iter()
            .find(|t| !(**t >= 0.0 && t.is_finite()))
        {
            return Err(Error::Config(format!(
                "run.snapshot_times must be non-negative, got {t}"
            )));
        }
        for (field, spec) in [("init.u0", &self.init.u0), ("init.v0", &self.init.v0)] {
            if let ProfileSpec::CosQuarter { amplitude } = spec {
                if !(*amplitude > 0.0 && amplitude.is_finite()) {
                    return Err(Error::Config(format!(
                        "{field}.amplitude must be positive, got {amplitude}"
                    )));
                }
            }
        }
        let init = self.initial_data()?;
        init.check()?;
        let report = validate_assumptions(&self.model, &init, DEFAULT_U_MAX, DEFAULT_SAMPLES);
        let failures: Vec<String> = report
            .failures()
            .map(|c| format!("({}) {}: {}", c.label, c.check, c.detail))
            .collect();
        if !failures.is_empty() {
            return Err(Error::Config(format!(
                "assumption check failed: {}",
                failures.join("; ")
            )));
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let periods = self.run.t_end / self.model.tau;
        if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) {
            out.push(format!(
                "run.t_end = {} is not a multiple of tau = {}; the last period is partial",
                self.run.t_end, self.model.tau
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("configuration serializes");
        s.push('\n');
        s
    }

    /// Parses and validates a configuration from a string.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<RunConfig> {
        let mut cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("{e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    RunConfig::from_json(&text, &base).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_profile_table(text: &str) -> std::result::Result<Profile, String> {
    let mut x = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(format!("line {}: expected two columns", lineno + 1)),
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(xa), Ok(vb)) => {
                x.push(xa);
                values.push(vb);
            }
            _ if x.is_empty() => continue,
            _ => return Err(format!("line {}: not a number", lineno + 1)),
        }
    }
    if x.len() < 2 {
        return Err("a tabulated profile needs at least two samples".into());
    }
    Ok(Profile::Tabulated { x, values })
}

/// Built-in reproduction cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// First example without intervention.
    #[serde(rename = "fig-a")]
    A,
    /// First example with the saturating reset `0.5 u / (10 + u)`.
    #[serde(rename = "fig-b")]
    B,
    /// Second example, weak expansion `mu2 = 1`.
    #[serde(rename = "fig-c")]
    C,
    /// Second example, strong expansion `mu2 = 10`.
    #[serde(rename = "fig-d")]
    D,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::A, Figure::B, Figure::C, Figure::D];

    pub fn id(&self) -> &'static str {
        match self {
            Figure::A => "fig-a",
            Figure::B => "fig-b",
            Figure::C => "fig-c",
            Figure::D => "fig-d",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Figure> {
        Figure::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown figure {s:?}; expected fig-a, fig-b, fig-c or fig-d"
                ))
            })
    }
}

/// Coefficients shared by both examples.
pub fn example_params(mu2: f64, impulse: ImpulseFn) -> ModelParams {
    ModelParams {
        d1: 0.1,
        d2: 0.4,
        a11: 0.3,
        a12: 0.5,
        a22: 0.1,
        mu1: 10.0,
        mu2,
        h0: 2.0,
        tau: 5.0,
        growth: GrowthFn::BevertonHolt { m: 1.0, a: 10.0 },
        impulse,
    }
}

/// Preset configuration for a reproduction case.
///
/// The decaying cases run for 40 periods. The persistent cases run for 80
/// periods so that the core has time to fill up to the plateau.
pub fn preset(figure: Figure) -> RunConfig {
    let (mu2, impulse, periods) = match figure {
        Figure::A => (15.0, ImpulseFn::Identity, 80),
        Figure::B => (15.0, ImpulseFn::Saturating { c: 0.5, b: 10.0 }, 40),
        Figure::C => (1.0, ImpulseFn::Identity, 40),
        Figure::D => (10.0, ImpulseFn::Identity, 80),
    };
    let model = example_params(mu2, impulse);
    let t_end = model.tau * periods as f64;
    let snapshot_times = (0..=2 * periods)
        .map(|k| 0.5 * model.tau * k as f64)
        .collect();
    RunConfig {
        model,
        init: InitSpec {
            u0: ProfileSpec::CosQuarter { amplitude: 0.3 },
            v0: ProfileSpec::CosQuarter { amplitude: 0.1 },
        },
        solver: SolverConfig::default(),
        run: RunSettings {
            t_end,
            snapshot_times,
            out_dir: None,
        },
        base_dir: PathBuf::new(),
    }
}
