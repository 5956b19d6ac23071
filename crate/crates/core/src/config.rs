//! Sampler selection and hyperparameters.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::schedules::DecaySign;

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Euler,
    LookAhead,
    LookBack,
    Momentum,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Euler => "euler",
            Algorithm::LookAhead => "look_ahead",
            Algorithm::LookBack => "look_back",
            Algorithm::Momentum => "momentum",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the look-ahead peek velocity is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeekMode {
    /// Finite difference `(z − z̃)/Δ`: no extra model call, κ measures
    /// the schedule mismatch between η and Δ. The default.
    #[default]
    FiniteDifference,
    /// Second field evaluation at `(z̃, t̃)`: κ reflects true field
    /// curvature at 2 model calls per step. Diagnostic mode; departs
    /// from the 1-call-per-step budget.
    ModelEval,
}

/// Curvature gate threshold: a positive number, or infinite so that every
/// finite κ passes the gate (the exact-reduction configuration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvatureThreshold<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> CurvatureThreshold<T> {
    /// True when a step with curvature `kappa` may keep the full update.
    pub fn accepts(&self, kappa: T) -> bool {
        match self {
            CurvatureThreshold::Infinite => true,
            CurvatureThreshold::Finite(tau) => kappa <= *tau,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CurvatureThreshold::Infinite)
    }
}

// JSON has no infinity literal; the wire sentinel is the string "inf".
impl<T: Serialize> Serialize for CurvatureThreshold<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvatureThreshold::Finite(x) => x.serialize(serializer),
            CurvatureThreshold::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for CurvatureThreshold<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw<T> {
            Num(T),
            Str(String),
        }
        match Raw::<T>::deserialize(deserializer)? {
            Raw::Num(x) => Ok(CurvatureThreshold::Finite(x)),
            Raw::Str(s) if s == "inf" => Ok(CurvatureThreshold::Infinite),
            Raw::Str(s) => Err(D::Error::custom(format!(
                "tau_curv must be a positive number or the string \"inf\", got \"{s}\""
            ))),
        }
    }
}

/// Full sampler configuration. Unspecified fields take the shipped
/// defaults; [`SamplerConfig::validate`] enforces every bound and runs
/// before any sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct SamplerConfig<T> {
    pub algorithm: Algorithm,
    /// Curvature gate threshold (look-ahead). Positive or infinite.
    #[serde(default = "default_tau_curv")]
    pub tau_curv: CurvatureThreshold<T>,
    /// Interpolation factor γ in (0, 1] applied on gate rejection.
    #[serde(default = "default_gamma_interp")]
    pub gamma_interp: T,
    /// Peek blend weight λ in [0, 1] (look-back).
    #[serde(default = "default_lambda_blend")]
    pub lambda_blend: T,
    /// EMA decay ceiling γ_max in [0, 1) (look-back).
    #[serde(default = "default_gamma_max")]
    pub gamma_max: T,
    /// Logistic steepness β > 0 of the decay schedule.
    #[serde(default = "default_beta_steepness")]
    pub beta_steepness: T,
    /// Log-SNR midpoint ξ* of the decay schedule.
    #[serde(default = "default_xi_star")]
    pub xi_star: T,
    /// Momentum coefficient β₁ in [0, 1).
    #[serde(default = "default_beta1")]
    pub beta1: T,
    /// Division guard ε > 0 in the curvature quotient.
    #[serde(default = "default_epsilon")]
    pub epsilon: T,
    #[serde(default)]
    pub peek_mode: PeekMode,
    #[serde(default)]
    pub decay_sign: DecaySign,
}

fn default_tau_curv<T: Real>() -> CurvatureThreshold<T> {
    CurvatureThreshold::Finite(T::from_f64_const(10.0))
}
fn default_gamma_interp<T: Real>() -> T {
    T::from_f64_const(0.9)
}
fn default_lambda_blend<T: Real>() -> T {
    T::from_f64_const(0.1)
}
fn default_gamma_max<T: Real>() -> T {
    T::from_f64_const(0.9)
}
fn default_beta_steepness<T: Real>() -> T {
    T::one()
}
fn default_xi_star<T: Real>() -> T {
    T::zero()
}
fn default_beta1<T: Real>() -> T {
    T::from_f64_const(0.8)
}
fn default_epsilon<T: Real>() -> T {
    T::from_f64_const(1e-8)
}

impl<T: Real> SamplerConfig<T> {
    /// Configuration with shipped defaults for the given algorithm.
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            tau_curv: default_tau_curv(),
            gamma_interp: default_gamma_interp(),
            lambda_blend: default_lambda_blend(),
            gamma_max: default_gamma_max(),
            beta_steepness: default_beta_steepness(),
            xi_star: default_xi_star(),
            beta1: default_beta1(),
            epsilon: default_epsilon(),
            peek_mode: PeekMode::default(),
            decay_sign: DecaySign::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CurvatureThreshold::Finite(tau) = self.tau_curv {
            if !tau.is_finite() || tau <= T::zero() {
                return Err(Error::invalid(format!(
                    "tau_curv must be positive or \"inf\", got {tau}"
                )));
            }
        }
        if !(self.gamma_interp > T::zero() && self.gamma_interp <= T::one()) {
            return Err(Error::invalid(format!(
                "gamma_interp must be in (0, 1], got {}",
                self.gamma_interp
            )));
        }
        if !(self.lambda_blend >= T::zero() && self.lambda_blend <= T::one()) {
            return Err(Error::invalid(format!(
                "lambda_blend must be in [0, 1], got {}",
                self.lambda_blend
            )));
        }
        if !(self.gamma_max >= T::zero() && self.gamma_max < T::one()) {
            return Err(Error::invalid(format!(
                "gamma_max must be in [0, 1), got {}",
                self.gamma_max
            )));
        }
        if !self.beta_steepness.is_finite() || self.beta_steepness <= T::zero() {
            return Err(Error::invalid(format!(
                "beta_steepness must be positive, got {}",
                self.beta_steepness
            )));
        }
        if !self.xi_star.is_finite() {
            return Err(Error::invalid("xi_star must be finite"));
        }
        if !(self.beta1 >= T::zero() && self.beta1 < T::one()) {
            return Err(Error::invalid(format!(
                "beta1 must be in [0, 1), got {}",
                self.beta1
            )));
        }
        if !self.epsilon.is_finite() || self.epsilon <= T::zero() {
            return Err(Error::invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}
