//! The velocity-field evaluation contract.
//!
//! Samplers never call a field directly: they go through a
//! [`FieldEvaluator`], which validates dimensions, rejects non-finite
//! outputs, and counts every evaluation. The counter is owned per
//! sampling run, so independent runs can evaluate the same field
//! concurrently.

use crate::error::{Error, Result};
use crate::fields::FieldKind;
use crate::scalar::Real;
use crate::state::StateVector;

/// An evaluable velocity field `v(z, t)` plus an opaque conditioning tag.
///
/// The tag mirrors the conditioning slot of a learned field; analytic
/// fields ignore it, but it participates in the determinism contract:
/// identical `(z, t, conditioning)` always yields the identical velocity.
#[derive(Debug, Clone)]
pub struct VelocityFieldSpec<T> {
    kind: FieldKind<T>,
    conditioning: Option<String>,
}

impl<T: Real> VelocityFieldSpec<T> {
    pub fn new(kind: FieldKind<T>) -> Self {
        Self {
            kind,
            conditioning: None,
        }
    }

    pub fn with_conditioning(mut self, tag: impl Into<String>) -> Self {
        self.conditioning = Some(tag.into());
        self
    }

    pub fn kind(&self) -> &FieldKind<T> {
        &self.kind
    }

    pub fn conditioning(&self) -> Option<&str> {
        self.conditioning.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }
}

/// Checked, counted access to a velocity field for one sampling run.
#[derive(Debug)]
pub struct FieldEvaluator<'a, T> {
    spec: &'a VelocityFieldSpec<T>,
    calls: u64,
}

impl<'a, T: Real> FieldEvaluator<'a, T> {
    pub fn new(spec: &'a VelocityFieldSpec<T>) -> Self {
        Self { spec, calls: 0 }
    }

    /// Evaluates `v(z, t)`. Counts exactly one model call, including when
    /// the result turns out non-finite.
    pub fn evaluate(&mut self, z: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        if z.dim() != self.spec.dim() {
            return Err(Error::invalid(format!(
                "state dim {} does not match field dim {}",
                z.dim(),
                self.spec.dim()
            )));
        }
        self.calls += 1;
        let v = self.spec.kind().velocity(z, t);
        if v.dim() != z.dim() {
            return Err(Error::numeric(format!(
                "field returned dim {} for input dim {}",
                v.dim(),
                z.dim()
            )));
        }
        if !v.is_finite() {
            return Err(Error::numeric("field returned a non-finite velocity"));
        }
        Ok(v)
    }

    /// Model calls made so far in this run.
    pub fn calls(&self) -> u64 {
        self.calls
    }
}
