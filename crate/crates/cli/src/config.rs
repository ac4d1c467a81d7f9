//! Run configuration: JSON schema, defaults, validation and model
//! construction. Flags and config files produce the same structure; flags
//! win on conflicts.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use contact_dynamics::integrators::StepMethod;
use contact_dynamics::models::{
    LinearDampedOscillator, PerturbedKepler, QuadraticActionOscillator, SeparableContactModel,
};
use contact_dynamics::state::ContactState;

use crate::CliError;

pub const MODEL_IDS: [&str; 3] = ["kepler", "quadratic_oscillator", "linear_oscillator"];

/// Full description of one simulation run. Serializes to the JSON config
/// format; unknown keys anywhere are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub method: MethodConfig,
    pub tau: f64,
    pub t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
    #[serde(default)]
    pub output: OutputConfig,
    /// Reserved for randomized test utilities; carried through round trips.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodConfig {
    pub id: String,
    #[serde(default)]
    pub b_map_compat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output file; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
}

fn default_sample_every() -> usize {
    1
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: OutputFormat::Csv,
            sample_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Jsonl => write!(f, "jsonl"),
        }
    }
}

/// A constructed model instance with its configuration retained.
#[derive(Debug, Clone)]
pub enum ModelInstance {
    Kepler(PerturbedKepler),
    Quadratic(QuadraticActionOscillator),
    Linear(LinearDampedOscillator),
}

impl ModelInstance {
    pub fn as_dyn(&self) -> &dyn SeparableContactModel {
        match self {
            ModelInstance::Kepler(m) => m,
            ModelInstance::Quadratic(m) => m,
            ModelInstance::Linear(m) => m,
        }
    }

    /// Model-specific default start: the circular orbit for the Kepler
    /// problem, the phase-space origin for the quadratic oscillator, and a
    /// unit displacement for the linear oscillator.
    pub fn default_initial(&self) -> ContactState {
        match self {
            ModelInstance::Kepler(m) => m.circular_start(),
            ModelInstance::Quadratic(_) => ContactState::scalar(0.0, 0.0, 0.0, 0.0),
            ModelInstance::Linear(_) => ContactState::scalar(1.0, 0.0, 0.0, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeplerParams {
    #[serde(default = "one")]
    mu: f64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_omega")]
    omega: f64,
    #[serde(default = "default_eps_radius")]
    eps_radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticParams {
    #[serde(default = "one")]
    gamma: f64,
    #[serde(rename = "C", default = "default_offset")]
    offset: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearParams {
    #[serde(default = "one")]
    omega0: f64,
    #[serde(default = "default_damping")]
    damping: f64,
}

fn one() -> f64 {
    1.0
}
fn default_alpha() -> f64 {
    0.01
}
fn default_omega() -> f64 {
    std::f64::consts::PI
}
fn default_eps_radius() -> f64 {
    PerturbedKepler::DEFAULT_EPS_RADIUS
}
fn default_offset() -> f64 {
    18.0
}
fn default_damping() -> f64 {
    0.2
}

/// Parameter keys accepted by each model, used to validate flag usage.
pub fn params_of(model_id: &str) -> &'static [&'static str] {
    match model_id {
        "kepler" => &["mu", "alpha", "omega", "eps_radius"],
        "quadratic_oscillator" => &["gamma", "C"],
        "linear_oscillator" => &["omega0", "damping"],
        _ => &[],
    }
}

/// Build the model described by `config`, validating parameter keys and
/// value constraints.
pub fn build_model(config: &ModelConfig) -> Result<ModelInstance, CliError> {
    let params = Value::Object(config.params.clone());
    let bad_params = |err: serde_json::Error| {
        CliError::config(format!("model `{}` parameters: {err}", config.id))
    };
    match config.id.as_str() {
        "kepler" => {
            let p: KeplerParams = serde_json::from_value(params).map_err(bad_params)?;
            if p.mu <= 0.0 {
                return Err(CliError::config("model parameter mu must be positive"));
            }
            if p.eps_radius <= 0.0 {
                return Err(CliError::config(
                    "model parameter eps_radius must be positive",
                ));
            }
            Ok(ModelInstance::Kepler(PerturbedKepler::with_guard(
                p.mu,
                p.alpha,
                p.omega,
                p.eps_radius,
            )))
        }
        "quadratic_oscillator" => {
            let p: QuadraticParams = serde_json::from_value(params).map_err(bad_params)?;
            if p.gamma <= 0.0 || p.offset <= 0.0 {
                return Err(CliError::config(
                    "model parameters gamma and C must be positive",
                ));
            }
            Ok(ModelInstance::Quadratic(QuadraticActionOscillator::new(
                p.gamma, p.offset,
            )))
        }
        "linear_oscillator" => {
            let p: LinearParams = serde_json::from_value(params).map_err(bad_params)?;
            if p.omega0 <= 0.0 {
                return Err(CliError::config("model parameter omega0 must be positive"));
            }
            if p.damping < 0.0 {
                return Err(CliError::config(
                    "model parameter damping must be non-negative",
                ));
            }
            Ok(ModelInstance::Linear(LinearDampedOscillator::new(
                p.omega0, p.damping,
            )))
        }
        other => Err(CliError::config(format!(
            "unknown model `{other}` (expected one of {})",
            MODEL_IDS.join(", ")
        ))),
    }
}

/// Parse and validate the method selection.
pub fn build_method(config: &MethodConfig) -> Result<StepMethod, CliError> {
    let method = StepMethod::from_str(&config.id)
        .map_err(|err| CliError::config(format!("method: {err}")))?;
    Ok(method.with_b_map_compat(config.b_map_compat))
}

impl RunConfig {
    /// Validate scalar constraints and assemble the pieces needed to run.
    pub fn prepare(&self) -> Result<(ModelInstance, StepMethod, ContactState), CliError> {
        let model = build_model(&self.model)?;
        let method = build_method(&self.method)?;
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(CliError::config(format!(
                "tau must be positive and finite, got {}",
                self.tau
            )));
        }
        if self.output.sample_every == 0 {
            return Err(CliError::config("sample_every must be at least 1"));
        }
        let initial = match &self.initial {
            None => model.default_initial(),
            Some(init) => ContactState::new(init.q.clone(), init.p.clone(), init.s, init.t)
                .map_err(|err| CliError::config(format!("initial state: {err}")))?,
        };
        if initial.dim() != model.as_dyn().dim() {
            return Err(CliError::config(format!(
                "initial state has dimension {} but model `{}` has dimension {}",
                initial.dim(),
                self.model.id,
                model.as_dyn().dim()
            )));
        }
        if !self.t_end.is_finite() || self.t_end < initial.t {
            return Err(CliError::config(format!(
                "t_end ({}) must be finite and not precede the initial time ({})",
                self.t_end, initial.t
            )));
        }
        Ok((model, method, initial))
    }
}

/// Read a config file, rejecting unknown keys with the offending name.
pub fn load_config_file(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::config(format!("cannot read config {}: {err}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|err| CliError::config(format!("config {}: {err}", path.display())))
}
