//! Trajectory-smoothing samplers for flow-matching ODEs.
//!
//! Sampling a flow model means integrating a velocity field `v(z, t)`
//! backward in time from `t = 1` (noise) to `t = 0` (data) on a discrete
//! grid. Plain Euler steps can overshoot or oscillate when the field is
//! stiff or the schedule is coarse. This crate implements the baseline
//! Euler sampler plus three training-free stabilization schemes behind a
//! single contract:
//!
//! * `look_ahead` — a curvature gate: each step compares the current
//!   velocity against a finite-difference peek of the next one and
//!   interpolates partially instead of committing when the normalized
//!   deviation exceeds a threshold.
//! * `look_back` — exponential state averaging: the velocity is evaluated
//!   at a blend of the current latent and an EMA of past latents, with an
//!   SNR-scheduled decay so smoothing vanishes near convergence.
//! * `momentum` — a per-trajectory first moment over step directions.
//!
//! Everything is validated against analytic velocity fields whose exact
//! flow maps are known in closed form ([`fields`]), so sampler claims can
//! be checked with real oracles instead of screenshots.
//!
//! All core math is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pin `f64`, which
//! is what the CLI and the validation suite use.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod grid;
pub mod rng;
pub mod samplers;
pub mod schedules;
pub mod scalar;
pub mod state;
pub mod trajectory;
pub mod velocity;

pub use config::{Algorithm, CurvatureThreshold, PeekMode, SamplerConfig};
pub use error::{Error, Result};
pub use grid::{GridKind, TimeGrid};
pub use scalar::Real;
pub use state::StateVector;
pub use trajectory::{StepRecord, Trajectory};
pub use velocity::{FieldEvaluator, VelocityFieldSpec};

/// `f64` aliases. State arithmetic at 64-bit precision is what the
/// reduction-to-Euler guarantees are stated for.
pub type State64 = StateVector<f64>;
pub type Grid64 = TimeGrid<f64>;
pub type Config64 = SamplerConfig<f64>;
pub type FieldSpec64 = VelocityFieldSpec<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type SnrSchedule64 = schedules::SnrSchedule<f64>;
