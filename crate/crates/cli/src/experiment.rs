//! Ensemble execution and report assembly.
//!
//! Ensemble members run concurrently (capped by `FLOWSMOOTH_THREADS`);
//! all randomness comes from per-member RNG substreams and all results
//! are collected by member index, so output never depends on completion
//! order. Report files are written in a single pass after every run has
//! finished.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use flowsmooth_core::diagnostics::TrajectoryReport;
use flowsmooth_core::fields::{exact_endpoint, reference_endpoint};
use flowsmooth_core::rng::GaussianSource;
use flowsmooth_core::samplers::run_sampler;
use flowsmooth_core::{Algorithm, State64, VelocityFieldSpec};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report;

/// Runner failure: bad config or filesystem trouble. Numeric failures
/// during sampling are not errors here — they are recorded per run.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Io { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => e.fmt(f),
            RunError::Io { path, source } => {
                write!(f, "io error at {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

/// Aggregated row of `summary.csv`.
#[derive(Debug, Clone)]
pub struct SamplerSummary {
    pub label: String,
    pub algorithm: Algorithm,
    pub runs_ok: usize,
    pub runs_failed: usize,
    pub mean_endpoint_error: Option<f64>,
    pub std_endpoint_error: Option<f64>,
    pub mean_oscillation_energy: Option<f64>,
    /// Model calls across successful runs.
    pub total_model_calls: u64,
    pub wall_time_s: f64,
    /// Message of the first failed run, when any failed.
    pub first_failure: Option<String>,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub summary: Vec<SamplerSummary>,
    pub summary_csv: String,
    pub out_dir: PathBuf,
    pub files_written: usize,
    /// True when every run of every sampler hit a numeric failure.
    pub all_failed: bool,
}

enum RunStatus {
    Ok {
        endpoint_error: Option<f64>,
        oscillation_energy: Option<f64>,
        model_calls: u64,
        traj_csv: Option<String>,
    },
    Failed {
        message: String,
    },
}

struct MemberRun {
    status: RunStatus,
    wall_s: f64,
}

/// Executes the whole sampler × ensemble sweep and writes `summary.csv`,
/// `timings.csv`, and (optionally) per-trajectory dumps into `out_dir`.
pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir_override: Option<&Path>,
    seed_override: Option<u64>,
) -> Result<ExperimentOutcome, RunError> {
    config.validate()?;
    let out_dir = match (out_dir_override, &config.output_dir) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) => dir.clone(),
        (None, None) => {
            return Err(ConfigError::new(
                "no output directory: set output_dir in the config or pass --out",
            )
            .into())
        }
    };
    let seed = seed_override.unwrap_or(config.seed);

    let field = config.field.build()?;
    let grid = config.grid.build()?;
    let snr = config.snr_schedule();
    let labels = config.sampler_labels();
    let fixed_init = config
        .z_init
        .as_ref()
        .map(|z| State64::new(z.clone()).expect("validated"));

    let ensemble = config.ensemble_size;
    let n_samplers = config.samplers.len();
    let threads = thread_count(ensemble)?;

    let next_member = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Vec<MemberRun>>>> = Mutex::new((0..ensemble).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next_member.fetch_add(1, Ordering::SeqCst);
                if i >= ensemble {
                    break;
                }
                let member = run_member(config, &field, &grid, &snr, fixed_init.as_ref(), seed, i);
                results.lock().expect("no poisoned worker")[i] = Some(member);
            });
        }
    });

    let results: Vec<Vec<MemberRun>> = results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|m| m.expect("every member index was processed"))
        .collect();

    // Aggregate per sampler in config order.
    let mut summary = Vec::with_capacity(n_samplers);
    for (s, sampler) in config.samplers.iter().enumerate() {
        let runs: Vec<&MemberRun> = results.iter().map(|member| &member[s]).collect();
        let mut endpoint_errors = Vec::new();
        let mut oscillation = Vec::new();
        let mut total_calls = 0u64;
        let mut runs_ok = 0;
        let mut runs_failed = 0;
        let mut wall = 0.0;
        let mut first_failure = None;
        for run in &runs {
            wall += run.wall_s;
            match &run.status {
                RunStatus::Ok {
                    endpoint_error,
                    oscillation_energy,
                    model_calls,
                    ..
                } => {
                    runs_ok += 1;
                    total_calls += model_calls;
                    if let Some(e) = endpoint_error {
                        endpoint_errors.push(*e);
                    }
                    if let Some(o) = oscillation_energy {
                        oscillation.push(*o);
                    }
                }
                RunStatus::Failed { message } => {
                    runs_failed += 1;
                    if first_failure.is_none() {
                        first_failure = Some(message.clone());
                    }
                }
            }
        }
        summary.push(SamplerSummary {
            label: labels[s].clone(),
            algorithm: sampler.algorithm,
            runs_ok,
            runs_failed,
            mean_endpoint_error: mean(&endpoint_errors),
            std_endpoint_error: unbiased_std(&endpoint_errors),
            mean_oscillation_energy: mean(&oscillation),
            total_model_calls: total_calls,
            wall_time_s: wall,
            first_failure,
        });
    }
    let all_failed = summary.iter().all(|row| row.runs_ok == 0);

    // Single-writer phase.
    std::fs::create_dir_all(&out_dir).map_err(|source| RunError::Io {
        path: out_dir.clone(),
        source,
    })?;
    let mut files_written = 0;

    let summary_csv = report::summary_csv(&summary);
    write_file(&out_dir.join("summary.csv"), &summary_csv)?;
    files_written += 1;
    write_file(&out_dir.join("timings.csv"), &report::timings_csv(&summary))?;
    files_written += 1;

    if config.write_trajectories {
        for (i, member) in results.iter().enumerate() {
            for (s, run) in member.iter().enumerate() {
                if let RunStatus::Ok {
                    traj_csv: Some(csv),
                    ..
                } = &run.status
                {
                    let name = format!("traj_{}_{i}.csv", labels[s]);
                    write_file(&out_dir.join(name), csv)?;
                    files_written += 1;
                }
            }
        }
    }

    Ok(ExperimentOutcome {
        summary,
        summary_csv,
        out_dir,
        files_written,
        all_failed,
    })
}

fn run_member(
    config: &ExperimentConfig,
    field: &VelocityFieldSpec<f64>,
    grid: &flowsmooth_core::Grid64,
    snr: &flowsmooth_core::SnrSchedule64,
    fixed_init: Option<&State64>,
    seed: u64,
    index: usize,
) -> Vec<MemberRun> {
    let z_init = match fixed_init {
        Some(z) => z.clone(),
        None => GaussianSource::substream(seed, index as u64).state_vector(field.dim()),
    };

    // One endpoint oracle per member, shared by all samplers.
    let oracle: Option<State64> = if config.field.has_closed_form() {
        exact_endpoint(field.kind(), &z_init).ok()
    } else {
        reference_endpoint(field.kind(), &z_init, config.reference_steps).ok()
    };

    config
        .samplers
        .iter()
        .map(|sampler| {
            let started = Instant::now();
            let status = match run_sampler(sampler, field, snr, grid, &z_init) {
                Ok(traj) => {
                    let report = TrajectoryReport::from_trajectory(&traj, oracle.as_ref())
                        .expect("oracle dimension matches by construction");
                    RunStatus::Ok {
                        endpoint_error: report.endpoint_error,
                        oscillation_energy: report.oscillation_energy,
                        model_calls: report.total_model_calls,
                        traj_csv: config
                            .write_trajectories
                            .then(|| report::trajectory_csv(&traj)),
                    }
                }
                Err(e) => RunStatus::Failed {
                    message: e.to_string(),
                },
            };
            MemberRun {
                status,
                wall_s: started.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn thread_count(ensemble: usize) -> Result<usize, RunError> {
    let cap = match std::env::var("FLOWSMOOTH_THREADS") {
        Ok(text) => text.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
            ConfigError::new(format!(
                "FLOWSMOOTH_THREADS must be a positive integer, got \"{text}\""
            ))
        })?,
        Err(_) => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    };
    Ok(cap.min(ensemble).max(1))
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn unbiased_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64;
    Some(var.sqrt())
}
