//! Log-SNR and decay schedules for the look-back sampler.
//!
//! The look-back EMA decay γ(t) is a logistic function of the log-SNR
//! ξ(t): smoothing is strong where the signal is buried in noise (ξ low,
//! t near 1) and shuts off as the trajectory converges (ξ high, t near
//! 0), recovering the native solver. `lookback_decay` implements
//! `γ(t) = γ_max · sigmoid(β · (ξ* − ξ(t)))`, which realizes exactly
//! those limits; the flipped argument is available via [`DecaySign`] for
//! comparison runs where the opposite convention is wanted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Clamp half-width keeping ξ(t) finite near the interval ends. The
/// decay saturates long before the clamp matters.
const T_FLOOR: f64 = 1e-6;

/// Orientation of the decay as a function of log-SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecaySign {
    /// γ falls as SNR rises: strong smoothing early, native solver near
    /// convergence. The default.
    #[default]
    DecreasingInSnr,
    /// γ rises as SNR rises. Comparison mode only.
    IncreasingInSnr,
}

/// Signal-to-noise schedule of the generative path `z_t = a_t x₀ + b_t ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnrSchedule<T> {
    /// `a_t = 1 − t`, `b_t = t`; needs no parameters.
    RectifiedFlow,
    /// Tabulated `ᾱ_t` curve, `a_t = sqrt(ᾱ_t)`, `b_t = sqrt(1 − ᾱ_t)`.
    /// Entries are `(t, ᾱ_t)` with t increasing and ᾱ strictly
    /// decreasing in (0, 1); lookups interpolate linearly.
    Diffusion { alpha_bar: Vec<(T, T)> },
}

impl<T: Real> SnrSchedule<T> {
    /// Validates schedule parameters; rectified flow is always valid.
    pub fn validate(&self) -> Result<()> {
        match self {
            SnrSchedule::RectifiedFlow => Ok(()),
            SnrSchedule::Diffusion { alpha_bar } => {
                if alpha_bar.len() < 2 {
                    return Err(Error::invalid(
                        "diffusion schedule needs at least 2 tabulated points",
                    ));
                }
                if alpha_bar
                    .iter()
                    .any(|&(t, a)| !t.is_finite() || !a.is_finite())
                {
                    return Err(Error::invalid("alpha_bar entries must be finite"));
                }
                for w in alpha_bar.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::invalid("alpha_bar times must be increasing"));
                    }
                    if w[1].1 >= w[0].1 {
                        return Err(Error::invalid(
                            "alpha_bar must be strictly decreasing in t",
                        ));
                    }
                }
                if alpha_bar
                    .iter()
                    .any(|&(_, a)| !(a > T::zero() && a < T::one()))
                {
                    return Err(Error::invalid("alpha_bar values must lie in (0, 1)"));
                }
                Ok(())
            }
        }
    }

    fn alpha_bar_at(&self, t: T) -> Result<T> {
        match self {
            SnrSchedule::RectifiedFlow => unreachable!("rectified flow has no alpha_bar"),
            SnrSchedule::Diffusion { alpha_bar } => {
                let first = alpha_bar.first().expect("validated non-empty");
                let last = alpha_bar.last().expect("validated non-empty");
                if t < first.0 || t > last.0 {
                    return Err(Error::Domain(format!(
                        "t = {t} outside tabulated range [{}, {}]",
                        first.0, last.0
                    )));
                }
                let idx = alpha_bar.partition_point(|&(tt, _)| tt <= t);
                if idx == 0 {
                    return Ok(first.1);
                }
                if idx == alpha_bar.len() {
                    return Ok(last.1);
                }
                let (t0, a0) = alpha_bar[idx - 1];
                let (t1, a1) = alpha_bar[idx];
                let w = (t - t0) / (t1 - t0);
                Ok(a0 + w * (a1 - a0))
            }
        }
    }
}

/// Log-SNR ξ(t) = log(a_t² / b_t²).
///
/// Rectified flow: `2·ln((1−t)/t)`, diverging at both ends; callers
/// clamp t first (see [`lookback_decay`]). Diffusion: `ln(ᾱ/(1−ᾱ))`.
pub fn log_snr<T: Real>(schedule: &SnrSchedule<T>, t: T) -> Result<T> {
    match schedule {
        SnrSchedule::RectifiedFlow => {
            if !(t > T::zero() && t < T::one()) {
                return Err(Error::Domain(format!(
                    "log-SNR is infinite at t = {t}; clamp to (0, 1) first"
                )));
            }
            Ok(T::from_f64_const(2.0) * ((T::one() - t) / t).ln())
        }
        SnrSchedule::Diffusion { .. } => {
            let a = schedule.alpha_bar_at(t)?;
            Ok((a / (T::one() - a)).ln())
        }
    }
}

/// EMA decay `γ(t) = γ_max · sigmoid(β (ξ* − ξ(t)))`, with t clamped to
/// `[1e-6, 1 − 1e-6]`. Always in `[0, γ_max]`; non-increasing in ξ, so
/// `γ → γ_max` as t → 1 and `γ → 0` as t → 0 under rectified flow.
pub fn lookback_decay<T: Real>(
    schedule: &SnrSchedule<T>,
    t: T,
    gamma_max: T,
    beta: T,
    xi_star: T,
) -> Result<T> {
    lookback_decay_signed(schedule, t, gamma_max, beta, xi_star, DecaySign::default())
}

/// [`lookback_decay`] with an explicit sigmoid-argument orientation.
pub fn lookback_decay_signed<T: Real>(
    schedule: &SnrSchedule<T>,
    t: T,
    gamma_max: T,
    beta: T,
    xi_star: T,
    sign: DecaySign,
) -> Result<T> {
    assert!(
        gamma_max >= T::zero() && gamma_max < T::one(),
        "gamma_max must be in [0, 1)"
    );
    assert!(beta > T::zero(), "beta must be positive");

    let floor = T::from_f64_const(T_FLOOR);
    let t_clamped = t.max(floor).min(T::one() - floor);
    let xi = log_snr(schedule, t_clamped)?;
    let arg = match sign {
        DecaySign::DecreasingInSnr => beta * (xi_star - xi),
        DecaySign::IncreasingInSnr => beta * (xi - xi_star),
    };
    Ok(gamma_max * sigmoid(arg))
}

/// Numerically symmetric logistic function.
fn sigmoid<T: Real>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}
