//! Discrete time grids for backward integration from t = 1 to t = 0.
//!
//! Two widths live on a grid and they are not the same thing: `deltas`
//! are the time advances `Δ_k = t_k − t_{k+1}`, while `step_sizes` are
//! the scheduler-native update magnitudes `η_k` used in `z − η_k v`.
//! They coincide on uniform grids. Under a sigma-shifted schedule the
//! update magnitude follows the warped clock `σ(t)` instead, so
//! `η_k ≠ Δ_k` and the finite-difference peek in the look-ahead sampler
//! measures the schedule mismatch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the step sizes are derived from the uniform node spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridKind {
    /// `η_k = Δ_k = 1/K`.
    Uniform,
    /// `η_k = σ(t_k) − σ(t_{k+1})` with `σ(t) = shift·t / (1 + (shift−1)·t)`.
    SigmaShift { shift: f64 },
}

/// Strictly decreasing times `1 = t_0 > … > t_K = 0` with per-step
/// advances and scheduler step sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid<T> {
    times: Vec<T>,
    deltas: Vec<T>,
    step_sizes: Vec<T>,
}

impl<T: Real> TimeGrid<T> {
    /// Builds a grid with `n_steps` steps of the given kind.
    pub fn new(n_steps: usize, kind: GridKind) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::invalid("n_steps must be >= 1"));
        }
        let k_total = T::from_usize_exact(n_steps);
        // (K - k)/K hits 1 and 0 exactly at the ends.
        let times: Vec<T> = (0..=n_steps)
            .map(|k| T::from_usize_exact(n_steps - k) / k_total)
            .collect();
        let deltas: Vec<T> = (0..n_steps).map(|k| times[k] - times[k + 1]).collect();

        let step_sizes = match kind {
            GridKind::Uniform => deltas.clone(),
            GridKind::SigmaShift { shift } => {
                if !shift.is_finite() || shift <= 0.0 {
                    return Err(Error::invalid(format!(
                        "sigma shift must be > 0, got {shift}"
                    )));
                }
                let shift = T::from_f64_const(shift);
                let sigma = |t: T| shift * t / (T::one() + (shift - T::one()) * t);
                (0..n_steps)
                    .map(|k| sigma(times[k]) - sigma(times[k + 1]))
                    .collect()
            }
        };

        if times.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::invalid(format!(
                "n_steps = {n_steps} is too fine for the scalar type: times collide"
            )));
        }
        if step_sizes.iter().any(|&s| !s.is_finite() || s <= T::zero()) {
            return Err(Error::invalid(
                "degenerate schedule: a step size underflowed to zero",
            ));
        }
        Ok(Self {
            times,
            deltas,
            step_sizes,
        })
    }

    pub fn uniform(n_steps: usize) -> Result<Self> {
        Self::new(n_steps, GridKind::Uniform)
    }

    pub fn sigma_shift(n_steps: usize, shift: f64) -> Result<Self> {
        Self::new(n_steps, GridKind::SigmaShift { shift })
    }

    /// Number of steps K. The grid holds K + 1 node times.
    pub fn n_steps(&self) -> usize {
        self.deltas.len()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn deltas(&self) -> &[T] {
        &self.deltas
    }

    pub fn step_sizes(&self) -> &[T] {
        &self.step_sizes
    }

    /// Node time `t_k`, `k <= K`.
    pub fn time(&self, k: usize) -> T {
        self.times[k]
    }

    /// Time advance `Δ_k = t_k − t_{k+1}`, `k < K`.
    pub fn delta(&self, k: usize) -> T {
        self.deltas[k]
    }

    /// Scheduler step size `η_k`, `k < K`.
    pub fn step_size(&self, k: usize) -> T {
        self.step_sizes[k]
    }
}

/// Convenience free-function form of [`TimeGrid::new`].
pub fn make_time_grid<T: Real>(n_steps: usize, kind: GridKind) -> Result<TimeGrid<T>> {
    TimeGrid::new(n_steps, kind)
}
