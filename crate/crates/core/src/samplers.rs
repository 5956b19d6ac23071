//! The four integration schemes behind one sampler contract.
//!
//! Every step advances time by exactly `Δ_k` regardless of gate
//! decisions, so all samplers stay synchronized with the scheduler, and
//! every step consumes exactly one model call — except look-ahead in
//! [`PeekMode::ModelEval`], which spends a second call to measure true
//! field curvature.
//!
//! Reductions to the plain Euler path are exact by construction: all
//! position updates funnel through the same `z − η·v` primitive, so
//! `look_ahead` with an infinite gate, `look_back` with `λ = 0` and
//! `momentum` with `β₁ = 0` reproduce the Euler trajectory bit for bit.

use crate::config::{Algorithm, PeekMode, SamplerConfig};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::scalar::Real;
use crate::schedules::{lookback_decay_signed, SnrSchedule};
use crate::state::StateVector;
use crate::trajectory::{StepRecord, Trajectory};
use crate::velocity::{FieldEvaluator, VelocityFieldSpec};

/// Mutable per-run state: the current latent plus whichever auxiliary
/// memory the algorithm keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerState<T> {
    /// Current latent z_k.
    pub z: StateVector<T>,
    /// Completed step count.
    pub k: usize,
    /// Running state average z̄_{k−1}; present only for look-back and
    /// seeded with z_0.
    pub ema: Option<StateVector<T>>,
    /// First moment m_k; present only for momentum and seeded with zero.
    pub momentum: Option<StateVector<T>>,
}

impl<T: Real> SamplerState<T> {
    /// Initial state for the configured algorithm.
    pub fn initial(config: &SamplerConfig<T>, z0: StateVector<T>) -> Self {
        let ema = (config.algorithm == Algorithm::LookBack).then(|| z0.clone());
        let momentum =
            (config.algorithm == Algorithm::Momentum).then(|| StateVector::zeros(z0.dim()));
        Self {
            z: z0,
            k: 0,
            ema,
            momentum,
        }
    }
}

/// Plain Euler update `z − η_k · v(z, t_k)`. One model call.
pub fn euler_step<T: Real>(
    z: &StateVector<T>,
    t_k: T,
    eta_k: T,
    field: &mut FieldEvaluator<'_, T>,
) -> Result<StateVector<T>> {
    if !eta_k.is_finite() || eta_k <= T::zero() {
        return Err(Error::invalid(format!("step size must be > 0, got {eta_k}")));
    }
    let v = field.evaluate(z, t_k)?;
    let z_next = z.sub_scaled(eta_k, &v);
    if !z_next.is_finite() {
        return Err(Error::numeric("euler update overflowed"));
    }
    Ok(z_next)
}

/// The scheduler's native predictor: `z̃ = z − η_k v`, `t̃ = t_k − Δ_k`.
/// No model call; the velocity is supplied.
pub fn scheduler_step<T: Real>(
    z: &StateVector<T>,
    v: &StateVector<T>,
    k: usize,
    grid: &TimeGrid<T>,
) -> (StateVector<T>, T) {
    let z_tilde = z.sub_scaled(grid.step_size(k), v);
    let t_tilde = grid.time(k) - grid.delta(k);
    (z_tilde, t_tilde)
}

/// Finite-difference peek `ṽ = (z − z̃)/Δ_k`: the effective velocity the
/// scheduler committed to, at no extra model call.
pub fn estimate_peek_velocity<T: Real>(
    z: &StateVector<T>,
    z_tilde: &StateVector<T>,
    delta_k: T,
) -> Result<StateVector<T>> {
    if !delta_k.is_finite() || delta_k <= T::zero() {
        return Err(Error::invalid(format!("delta must be > 0, got {delta_k}")));
    }
    Ok(z.sub(z_tilde).div(delta_k))
}

/// Normalized directional deviation `κ = ‖ṽ − v‖ / (‖z̃ − z‖ + ε)`.
/// Finite and non-negative for any finite inputs; ε guards the quotient
/// when the step goes nowhere.
pub fn curvature<T: Real>(
    v: &StateVector<T>,
    v_tilde: &StateVector<T>,
    z: &StateVector<T>,
    z_tilde: &StateVector<T>,
    epsilon: T,
) -> T {
    assert!(epsilon > T::zero(), "epsilon must be positive");
    v_tilde.dist(v) / (z_tilde.dist(z) + epsilon)
}

/// One curvature-gated step: take the scheduler's full predictor step if
/// the peeked deviation stays under `tau_curv`, otherwise commit only a
/// γ-fraction of it. Time advances to `t̃` on both branches.
pub fn look_ahead_step<T: Real>(
    state: SamplerState<T>,
    k: usize,
    grid: &TimeGrid<T>,
    config: &SamplerConfig<T>,
    field: &mut FieldEvaluator<'_, T>,
) -> Result<(SamplerState<T>, StepRecord<T>)> {
    debug_assert_eq!(config.algorithm, Algorithm::LookAhead);
    let calls_before = field.calls();
    let t_k = grid.time(k);

    let v = field.evaluate(&state.z, t_k).map_err(|e| e.at_step(k))?;
    let (z_tilde, t_tilde) = scheduler_step(&state.z, &v, k, grid);
    if !z_tilde.is_finite() {
        return Err(Error::numeric("predictor state overflowed").at_step(k));
    }
    let v_tilde = match config.peek_mode {
        PeekMode::FiniteDifference => {
            estimate_peek_velocity(&state.z, &z_tilde, grid.delta(k)).map_err(|e| e.at_step(k))?
        }
        PeekMode::ModelEval => field
            .evaluate(&z_tilde, t_tilde)
            .map_err(|e| e.at_step(k))?,
    };

    let kappa = curvature(&v, &v_tilde, &state.z, &z_tilde, config.epsilon);
    let accepted = config.tau_curv.accepts(kappa);
    let z_next = if accepted {
        z_tilde
    } else {
        let offset = z_tilde.sub(&state.z);
        state.z.add_scaled(config.gamma_interp, &offset)
    };
    if !z_next.is_finite() {
        return Err(Error::numeric("interpolated state is non-finite").at_step(k));
    }

    let record = StepRecord {
        kappa: Some(kappa),
        accepted_full_step: Some(accepted),
        gamma_t: None,
        model_calls: field.calls() - calls_before,
    };
    Ok((
        SamplerState {
            z: z_next,
            k: k + 1,
            ema: state.ema,
            momentum: state.momentum,
        },
        record,
    ))
}

/// Running state average `γ·prev + (1−γ)·current`.
pub fn ema_update<T: Real>(
    prev: &StateVector<T>,
    current: &StateVector<T>,
    gamma: T,
) -> StateVector<T> {
    assert_eq!(prev.dim(), current.dim(), "state dimension mismatch");
    let w = T::one() - gamma;
    StateVector::from_raw(
        prev.values()
            .iter()
            .zip(current.values())
            .map(|(&p, &c)| gamma * p + w * c)
            .collect(),
    )
}

/// Evaluation point `(1−λ)·z + λ·z̄`: the current latent pulled toward
/// its smoothed history.
pub fn peek_blend<T: Real>(
    z: &StateVector<T>,
    ema_prev: &StateVector<T>,
    lambda: T,
) -> StateVector<T> {
    z.lerp(ema_prev, lambda)
}

/// One history-averaged step. The EMA update and the peek blend both use
/// the pre-update average z̄_{k−1}; the velocity is evaluated once at
/// the blended latent and applied from the unblended z_k.
pub fn look_back_step<T: Real>(
    state: SamplerState<T>,
    k: usize,
    grid: &TimeGrid<T>,
    config: &SamplerConfig<T>,
    field: &mut FieldEvaluator<'_, T>,
    snr: &SnrSchedule<T>,
) -> Result<(SamplerState<T>, StepRecord<T>)> {
    debug_assert_eq!(config.algorithm, Algorithm::LookBack);
    let calls_before = field.calls();
    let t_k = grid.time(k);

    let ema_prev = state
        .ema
        .ok_or_else(|| Error::invalid("look_back state is missing its running average"))?;
    let gamma_t = lookback_decay_signed(
        snr,
        t_k,
        config.gamma_max,
        config.beta_steepness,
        config.xi_star,
        config.decay_sign,
    )?;

    let ema_next = ema_update(&ema_prev, &state.z, gamma_t);
    let peek = peek_blend(&state.z, &ema_prev, config.lambda_blend);
    let v = field.evaluate(&peek, t_k).map_err(|e| e.at_step(k))?;
    let z_next = state.z.sub_scaled(grid.step_size(k), &v);
    if !z_next.is_finite() {
        return Err(Error::numeric("look_back update overflowed").at_step(k));
    }

    let record = StepRecord {
        kappa: None,
        accepted_full_step: None,
        gamma_t: Some(gamma_t),
        model_calls: field.calls() - calls_before,
    };
    Ok((
        SamplerState {
            z: z_next,
            k: k + 1,
            ema: Some(ema_next),
            momentum: state.momentum,
        },
        record,
    ))
}

/// One momentum step: `g = −v(z, t_k)`, `m ← β₁ m + (1−β₁) g`,
/// `z ← z + η_k m`.
pub fn momentum_step<T: Real>(
    state: SamplerState<T>,
    k: usize,
    grid: &TimeGrid<T>,
    config: &SamplerConfig<T>,
    field: &mut FieldEvaluator<'_, T>,
) -> Result<(SamplerState<T>, StepRecord<T>)> {
    debug_assert_eq!(config.algorithm, Algorithm::Momentum);
    let calls_before = field.calls();
    let t_k = grid.time(k);

    let m_prev = state
        .momentum
        .ok_or_else(|| Error::invalid("momentum state is missing its first moment"))?;
    let v = field.evaluate(&state.z, t_k).map_err(|e| e.at_step(k))?;
    let g = v.scale(-T::one());
    let m_next = ema_update(&m_prev, &g, config.beta1);
    let z_next = state.z.add_scaled(grid.step_size(k), &m_next);
    if !z_next.is_finite() || !m_next.is_finite() {
        return Err(Error::numeric("momentum update overflowed").at_step(k));
    }

    let record = StepRecord::plain(field.calls() - calls_before);
    Ok((
        SamplerState {
            z: z_next,
            k: k + 1,
            ema: state.ema,
            momentum: Some(m_next),
        },
        record,
    ))
}

/// Drives the configured algorithm over the whole grid and returns the
/// full trajectory: K+1 states, the grid node times, and K step records
/// whose call counts sum to the run's model-call total.
pub fn run_sampler<T: Real>(
    config: &SamplerConfig<T>,
    field_spec: &VelocityFieldSpec<T>,
    snr: &SnrSchedule<T>,
    grid: &TimeGrid<T>,
    z_init: &StateVector<T>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    snr.validate()?;
    if z_init.dim() != field_spec.dim() {
        return Err(Error::invalid(format!(
            "z_init dim {} does not match field dim {}",
            z_init.dim(),
            field_spec.dim()
        )));
    }

    let n_steps = grid.n_steps();
    let mut field = FieldEvaluator::new(field_spec);
    let mut state = SamplerState::initial(config, z_init.clone());
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut records = Vec::with_capacity(n_steps);
    states.push(state.z.clone());

    for k in 0..n_steps {
        let (next, record) = match config.algorithm {
            Algorithm::Euler => {
                let calls_before = field.calls();
                let z_next = euler_step(&state.z, grid.time(k), grid.step_size(k), &mut field)
                    .map_err(|e| e.at_step(k))?;
                let record = StepRecord::plain(field.calls() - calls_before);
                (
                    SamplerState {
                        z: z_next,
                        k: k + 1,
                        ema: state.ema,
                        momentum: state.momentum,
                    },
                    record,
                )
            }
            Algorithm::LookAhead => look_ahead_step(state, k, grid, config, &mut field)?,
            Algorithm::LookBack => look_back_step(state, k, grid, config, &mut field, snr)?,
            Algorithm::Momentum => momentum_step(state, k, grid, config, &mut field)?,
        };
        state = next;
        states.push(state.z.clone());
        records.push(record);
    }

    debug_assert_eq!(
        field.calls(),
        records.iter().map(|r| r.model_calls).sum::<u64>(),
        "per-step call counts must sum to the run total"
    );
    Trajectory::new(states, grid.times().to_vec(), records)
}
