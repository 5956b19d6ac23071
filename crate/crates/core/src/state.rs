//! Latent state vectors.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point in state space. Coordinates are finite by construction; the
/// dimension never changes after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    values: Vec<T>,
}

impl<T: Real> StateVector<T> {
    /// Builds a state from raw coordinates, rejecting NaN and infinity.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("state vector must have dim >= 1"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::numeric(format!(
                "non-finite coordinate at index {i}"
            )));
        }
        Ok(Self { values })
    }

    /// Zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "state vector must have dim >= 1");
        Self {
            values: vec![T::zero(); dim],
        }
    }

    /// Internal constructor for arithmetic results. Finiteness is checked
    /// by the samplers at step boundaries, not per operation.
    pub(crate) fn from_raw(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `factor * self`.
    pub fn scale(&self, factor: T) -> Self {
        Self::from_raw(self.values.iter().map(|&a| factor * a).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: T, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + factor * b)
    }

    /// `self - factor * other`. This is the Euler / scheduler-step
    /// primitive; every sampler funnels its position update through it so
    /// that reduction guarantees hold bitwise.
    pub fn sub_scaled(&self, factor: T, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - factor * b)
    }

    /// Convex blend `(1 - weight) * self + weight * other`.
    pub fn lerp(&self, other: &Self, weight: T) -> Self {
        let w0 = T::one() - weight;
        self.zip_with(other, |a, b| w0 * a + weight * b)
    }

    /// Componentwise `self / divisor`.
    pub fn div(&self, divisor: T) -> Self {
        Self::from_raw(self.values.iter().map(|&a| a / divisor).collect())
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    /// Euclidean distance to `other`.
    pub fn dist(&self, other: &Self) -> T {
        self.sub(other).norm()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "state dimension mismatch: {} vs {}",
            self.dim(),
            other.dim()
        );
        Self::from_raw(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl<T: Real> std::ops::Index<usize> for StateVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}
