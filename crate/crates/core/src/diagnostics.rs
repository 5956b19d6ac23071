//! Quantitative measurements over trajectories and ensembles.
//!
//! All functions here are pure in the trajectory; recomputation is
//! idempotent.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateVector;
use crate::trajectory::Trajectory;

/// Euclidean distance between the terminal state and an oracle endpoint.
pub fn endpoint_error<T: Real>(traj: &Trajectory<T>, oracle_z0: &StateVector<T>) -> Result<T> {
    let z_final = traj.final_state();
    if z_final.dim() != oracle_z0.dim() {
        return Err(Error::invalid(format!(
            "oracle dim {} does not match trajectory dim {}",
            oracle_z0.dim(),
            z_final.dim()
        )));
    }
    Ok(z_final.dist(oracle_z0))
}

/// Sum of squared second differences `Σ ‖z_{k+1} − 2 z_k + z_{k−1}‖²`.
///
/// Zero for any constant-velocity trajectory, large for jittering paths;
/// grid-native and parameter-free.
pub fn oscillation_energy<T: Real>(traj: &Trajectory<T>) -> Result<T> {
    let states = traj.states();
    if states.len() < 3 {
        return Err(Error::invalid(format!(
            "oscillation energy needs >= 3 states, got {}",
            states.len()
        )));
    }
    let two = T::from_f64_const(2.0);
    let mut energy = T::zero();
    for w in states.windows(3) {
        let second_diff = w[2].sub(&w[1].scale(two)).add(&w[0]);
        let n = second_diff.norm();
        energy += n * n;
    }
    Ok(energy)
}

/// Arithmetic mean and unbiased (n−1) per-coordinate standard deviation
/// of a collection of endpoints.
pub fn ensemble_moments<T: Real>(
    endpoints: &[StateVector<T>],
) -> Result<(StateVector<T>, StateVector<T>)> {
    let n = endpoints.len();
    if n == 0 {
        return Err(Error::invalid("ensemble is empty"));
    }
    if n < 2 {
        return Err(Error::invalid(
            "unbiased standard deviation needs >= 2 endpoints",
        ));
    }
    let dim = endpoints[0].dim();
    if endpoints.iter().any(|e| e.dim() != dim) {
        return Err(Error::invalid("ensemble endpoints have mixed dimensions"));
    }

    let count = T::from_usize_exact(n);
    let mut mean = vec![T::zero(); dim];
    for e in endpoints {
        for (m, &x) in mean.iter_mut().zip(e.values()) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= count;
    }

    let denom = T::from_usize_exact(n - 1);
    let mut var = vec![T::zero(); dim];
    for e in endpoints {
        for ((v, &x), &m) in var.iter_mut().zip(e.values()).zip(&mean) {
            let d = x - m;
            *v += d * d;
        }
    }
    let std = var.into_iter().map(|v| (v / denom).sqrt()).collect();

    Ok((StateVector::from_raw(mean), StateVector::from_raw(std)))
}

/// True iff every step logged exactly `expected_calls_per_step` model
/// calls and the trajectory total matches `K × expected`.
pub fn verify_call_budget<T: Real>(traj: &Trajectory<T>, expected_calls_per_step: u64) -> bool {
    traj.records()
        .iter()
        .all(|r| r.model_calls == expected_calls_per_step)
        && traj.total_model_calls() == expected_calls_per_step * traj.n_steps() as u64
}

/// Per-trajectory summary used by reports and acceptance checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryReport<T> {
    /// Distance to the oracle endpoint; absent when no oracle exists.
    pub endpoint_error: Option<T>,
    /// Absent for trajectories with fewer than 3 states.
    pub oscillation_energy: Option<T>,
    pub total_model_calls: u64,
    /// (min, max, mean) over recorded κ values, when any step logged one.
    pub kappa_stats: Option<(T, T, T)>,
    /// Sum of consecutive state distances.
    pub path_length: T,
}

impl<T: Real> TrajectoryReport<T> {
    pub fn from_trajectory(traj: &Trajectory<T>, oracle_z0: Option<&StateVector<T>>) -> Result<Self> {
        let endpoint_error = match oracle_z0 {
            Some(oracle) => Some(endpoint_error(traj, oracle)?),
            None => None,
        };
        let oscillation_energy = if traj.states().len() >= 3 {
            Some(oscillation_energy(traj)?)
        } else {
            None
        };

        let kappas: Vec<T> = traj.records().iter().filter_map(|r| r.kappa).collect();
        let kappa_stats = if kappas.is_empty() {
            None
        } else {
            let min = kappas.iter().copied().fold(T::infinity(), T::min);
            let max = kappas.iter().copied().fold(T::neg_infinity(), T::max);
            let mean = kappas.iter().copied().fold(T::zero(), |a, b| a + b)
                / T::from_usize_exact(kappas.len());
            Some((min, max, mean))
        };

        let path_length = traj
            .states()
            .windows(2)
            .fold(T::zero(), |acc, w| acc + w[1].dist(&w[0]));

        Ok(Self {
            endpoint_error,
            oscillation_energy,
            total_model_calls: traj.total_model_calls(),
            kappa_stats,
            path_length,
        })
    }
}
