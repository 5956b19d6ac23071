//! Declarative experiment configuration.
//!
//! A config is one JSON document. Sampler keys mirror the
//! [`SamplerConfig`] field names verbatim; `tau_curv` accepts a positive
//! number or the string `"inf"`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use flowsmooth_core::fields::{
    FieldKind, GaussianRfField, LinearMatrixField, StiffTrackingField, REFERENCE_STEPS,
};
use flowsmooth_core::grid::GridKind;
use flowsmooth_core::schedules::SnrSchedule;
use flowsmooth_core::{Algorithm, Grid64, SamplerConfig, State64, VelocityFieldSpec};

/// Analytic field selection, addressable by name + parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldConfig {
    GaussianRf { s0: f64, dim: usize },
    LinearMatrix { matrix: Vec<Vec<f64>> },
    StiffTracking { stiffness: f64, dim: usize },
}

impl FieldConfig {
    pub fn build(&self) -> Result<VelocityFieldSpec<f64>, ConfigError> {
        let kind = match self {
            FieldConfig::GaussianRf { s0, dim } => {
                FieldKind::GaussianRf(GaussianRfField::new(*s0, *dim).map_err(field_err)?)
            }
            FieldConfig::LinearMatrix { matrix } => FieldKind::LinearMatrix(
                LinearMatrixField::new(matrix.clone()).map_err(field_err)?,
            ),
            FieldConfig::StiffTracking { stiffness, dim } => FieldKind::StiffTracking(
                StiffTrackingField::new(*stiffness, *dim).map_err(field_err)?,
            ),
        };
        Ok(VelocityFieldSpec::new(kind))
    }

    /// True when the exact flow map is known in closed form; otherwise
    /// the runner falls back to the brute-force reference.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, FieldConfig::StiffTracking { .. })
    }
}

fn field_err(e: flowsmooth_core::Error) -> ConfigError {
    ConfigError::new(format!("field: {e}"))
}

// No deny_unknown_fields here: it cannot coexist with the flattened
// grid-kind tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_steps: usize,
    #[serde(flatten)]
    pub kind: GridKind,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid64, ConfigError> {
        Grid64::new(self.n_steps, self.kind).map_err(|e| ConfigError::new(format!("grid: {e}")))
    }
}

fn default_reference_steps() -> usize {
    REFERENCE_STEPS
}

/// Top-level experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub field: FieldConfig,
    pub grid: GridConfig,
    /// SNR schedule for look-back decay; defaults to rectified flow.
    #[serde(default)]
    pub snr: Option<SnrSchedule<f64>>,
    pub samplers: Vec<SamplerConfig<f64>>,
    pub ensemble_size: usize,
    pub seed: u64,
    /// Where reports go; `--out` overrides.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Fixed initial state shared by all ensemble members. When absent,
    /// member i draws z_init ~ N(0, I) from RNG substream i.
    #[serde(default)]
    pub z_init: Option<Vec<f64>>,
    /// Also write one `traj_<sampler>_<i>.csv` per run.
    #[serde(default)]
    pub write_trajectories: bool,
    /// Resolution of the brute-force endpoint reference for fields
    /// without a closed form.
    #[serde(default = "default_reference_steps")]
    pub reference_steps: usize,
}

impl ExperimentConfig {
    /// Parses and semantically validates a JSON config.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            ConfigError::new(format!(
                "line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let field = self.field.build()?;
        let grid = self.grid.build()?;

        if self.ensemble_size == 0 {
            return Err(ConfigError::new("ensemble_size must be >= 1"));
        }
        if self.samplers.is_empty() {
            return Err(ConfigError::new("samplers list is empty"));
        }
        for (i, sampler) in self.samplers.iter().enumerate() {
            sampler
                .validate()
                .map_err(|e| ConfigError::new(format!("samplers[{i}]: {e}")))?;
        }
        if self.reference_steps == 0 {
            return Err(ConfigError::new("reference_steps must be >= 1"));
        }

        if let Some(z) = &self.z_init {
            let state = State64::new(z.clone())
                .map_err(|e| ConfigError::new(format!("z_init: {e}")))?;
            if state.dim() != field.dim() {
                return Err(ConfigError::new(format!(
                    "z_init dim {} does not match field dim {}",
                    state.dim(),
                    field.dim()
                )));
            }
        }

        let snr = self.snr_schedule();
        snr.validate()
            .map_err(|e| ConfigError::new(format!("snr: {e}")))?;
        if let SnrSchedule::Diffusion { alpha_bar } = &snr {
            let uses_look_back = self
                .samplers
                .iter()
                .any(|s| s.algorithm == Algorithm::LookBack);
            if uses_look_back {
                let lo = alpha_bar.first().expect("validated").0;
                let hi = alpha_bar.last().expect("validated").0;
                // Decay lookups clamp t to this window; the table must
                // cover it so no run can fail mid-flight.
                if lo > 1e-6 || hi < 1.0 - 1e-6 {
                    return Err(ConfigError::new(format!(
                        "snr: diffusion table [{lo}, {hi}] must cover [1e-6, 1 - 1e-6]"
                    )));
                }
            }
        }
        let _ = grid;
        Ok(())
    }

    pub fn snr_schedule(&self) -> SnrSchedule<f64> {
        self.snr.clone().unwrap_or(SnrSchedule::RectifiedFlow)
    }

    /// Stable per-sampler labels: the algorithm name, with `_2`, `_3`, …
    /// suffixes for repeats in list order.
    pub fn sampler_labels(&self) -> Vec<String> {
        let mut counts = std::collections::HashMap::new();
        self.samplers
            .iter()
            .map(|s| {
                let n = counts.entry(s.algorithm).or_insert(0usize);
                *n += 1;
                if *n == 1 {
                    s.algorithm.to_string()
                } else {
                    format!("{}_{}", s.algorithm, n)
                }
            })
            .collect()
    }
}

/// Configuration rejection with a printable reason.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}
