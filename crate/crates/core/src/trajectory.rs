//! Trajectories and per-step diagnostics records.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateVector;

/// What one sampling step did. Fields are populated per algorithm:
/// κ and the gate decision exist only for look-ahead, γ(t) only for
/// look-back; every algorithm logs at least one model call.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<T> {
    pub kappa: Option<T>,
    pub accepted_full_step: Option<bool>,
    pub gamma_t: Option<T>,
    pub model_calls: u64,
}

impl<T> StepRecord<T> {
    pub(crate) fn plain(model_calls: u64) -> Self {
        Self {
            kappa: None,
            accepted_full_step: None,
            gamma_t: None,
            model_calls,
        }
    }
}

/// Ordered record of a completed sampling run: K+1 states, the matching
/// node times, and K step records.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    states: Vec<StateVector<T>>,
    times: Vec<T>,
    step_records: Vec<StepRecord<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(
        states: Vec<StateVector<T>>,
        times: Vec<T>,
        step_records: Vec<StepRecord<T>>,
    ) -> Result<Self> {
        if states.len() != times.len() {
            return Err(Error::invalid(format!(
                "states ({}) and times ({}) must have equal length",
                states.len(),
                times.len()
            )));
        }
        if states.len() != step_records.len() + 1 {
            return Err(Error::invalid(format!(
                "expected {} states for {} step records, got {}",
                step_records.len() + 1,
                step_records.len(),
                states.len()
            )));
        }
        Ok(Self {
            states,
            times,
            step_records,
        })
    }

    /// Number of steps K.
    pub fn n_steps(&self) -> usize {
        self.step_records.len()
    }

    pub fn states(&self) -> &[StateVector<T>] {
        &self.states
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn records(&self) -> &[StepRecord<T>] {
        &self.step_records
    }

    pub fn initial_state(&self) -> &StateVector<T> {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector<T> {
        self.states.last().expect("trajectory has K+1 >= 1 states")
    }

    /// Sum of per-step model call counts.
    pub fn total_model_calls(&self) -> u64 {
        self.step_records.iter().map(|r| r.model_calls).sum()
    }
}
