//! Analytic velocity fields with exact-solution oracles.
//!
//! These stand in for a learned velocity field so that sampler behavior
//! can be checked against ground truth at desk scale: the Gaussian and
//! linear fields have closed-form flow maps, and the stiff tracking field
//! has a brute-force high-resolution reference.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateVector;

/// Number of uniform Euler steps used by the brute-force reference when
/// no closed form exists. Error is far below any tolerance checked here.
pub const REFERENCE_STEPS: usize = 100_000;

// ---------------------------------------------------------------------------
// Field definitions
// ---------------------------------------------------------------------------

/// Flow-matching field between centered Gaussians `N(0, s0² I)` at t = 0
/// and `N(0, I)` at t = 1, along the path `z_t = (1−t) x₀ + t ε`.
///
/// The marginal velocity is linear in z: `v(z, t) = c(t) z` with
/// `c(t) = (t − (1−t) s0²) / ((1−t)² s0² + t²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRfField<T> {
    s0: T,
    dim: usize,
}

impl<T: Real> GaussianRfField<T> {
    pub fn new(s0: T, dim: usize) -> Result<Self> {
        if !s0.is_finite() || s0 <= T::zero() {
            return Err(Error::invalid(format!("s0 must be positive, got {s0}")));
        }
        if dim == 0 {
            return Err(Error::invalid("dim must be >= 1"));
        }
        Ok(Self { s0, dim })
    }

    pub fn s0(&self) -> T {
        self.s0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Velocity coefficient `c(t)`.
    pub fn coefficient(&self, t: T) -> T {
        let one = T::one();
        let s0_sq = self.s0 * self.s0;
        let rem = one - t;
        (t - rem * s0_sq) / (rem * rem * s0_sq + t * t)
    }

    /// Marginal standard deviation `s_t = sqrt((1−t)² s0² + t²)`.
    pub fn marginal_scale(&self, t: T) -> T {
        let rem = T::one() - t;
        (rem * rem * self.s0 * self.s0 + t * t).sqrt()
    }

    pub fn velocity(&self, z: &StateVector<T>, t: T) -> StateVector<T> {
        z.scale(self.coefficient(t))
    }
}

/// Time-independent linear field `v(z, t) = A z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatrixField<T> {
    matrix: SquareMatrix<T>,
}

impl<T: Real> LinearMatrixField<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        Ok(Self {
            matrix: SquareMatrix::from_rows(rows)?,
        })
    }

    /// Planar rotation generator `omega · [[0, −1], [1, 0]]`.
    pub fn rotation2(omega: T) -> Self {
        let z = T::zero();
        Self {
            matrix: SquareMatrix::from_rows(vec![vec![z, -omega], vec![omega, z]])
                .expect("2x2 rotation generator is well formed"),
        }
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn velocity(&self, z: &StateVector<T>) -> StateVector<T> {
        self.matrix.mul_vec(z)
    }
}

/// Stiff relaxation toward a moving target: `v(z, t) = −κ (z − g(t))`
/// with `g(t) = (sin 2πt, cos 2πt, sin 2πt, …)` across coordinates.
///
/// Backward integration runs against the contraction, so explicit solvers
/// amplify any deviation from the target path by `(1 + η κ)` per step; a
/// useful stand-in for low-SNR stiffness.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffTrackingField<T> {
    stiffness: T,
    dim: usize,
}

impl<T: Real> StiffTrackingField<T> {
    pub fn new(stiffness: T, dim: usize) -> Result<Self> {
        if !stiffness.is_finite() || stiffness <= T::zero() {
            return Err(Error::invalid(format!(
                "stiffness must be positive, got {stiffness}"
            )));
        }
        if dim == 0 {
            return Err(Error::invalid("dim must be >= 1"));
        }
        Ok(Self { stiffness, dim })
    }

    pub fn stiffness(&self) -> T {
        self.stiffness
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Target path g(t), alternating sin/cos across coordinates.
    pub fn target(&self, t: T) -> StateVector<T> {
        let angle = T::from_f64_const(2.0) * T::PI() * t;
        let (s, c) = (angle.sin(), angle.cos());
        StateVector::from_raw(
            (0..self.dim)
                .map(|j| if j % 2 == 0 { s } else { c })
                .collect(),
        )
    }

    pub fn velocity(&self, z: &StateVector<T>, t: T) -> StateVector<T> {
        z.sub(&self.target(t)).scale(-self.stiffness)
    }
}

/// Caller-supplied velocity function; must be deterministic.
pub type CustomVelocityFn<T> = Arc<dyn Fn(&StateVector<T>, T) -> StateVector<T> + Send + Sync>;

/// The catalogue of evaluable fields.
#[derive(Clone)]
pub enum FieldKind<T> {
    GaussianRf(GaussianRfField<T>),
    LinearMatrix(LinearMatrixField<T>),
    StiffTracking(StiffTrackingField<T>),
    Custom { dim: usize, func: CustomVelocityFn<T> },
}

impl<T: Real> FieldKind<T> {
    pub fn dim(&self) -> usize {
        match self {
            FieldKind::GaussianRf(f) => f.dim(),
            FieldKind::LinearMatrix(f) => f.dim(),
            FieldKind::StiffTracking(f) => f.dim(),
            FieldKind::Custom { dim, .. } => *dim,
        }
    }

    /// Raw field evaluation, no bookkeeping. Use
    /// [`crate::velocity::FieldEvaluator`] inside sampling runs so calls
    /// are counted and checked.
    pub fn velocity(&self, z: &StateVector<T>, t: T) -> StateVector<T> {
        match self {
            FieldKind::GaussianRf(f) => f.velocity(z, t),
            FieldKind::LinearMatrix(f) => f.velocity(z),
            FieldKind::StiffTracking(f) => f.velocity(z, t),
            FieldKind::Custom { func, .. } => func(z, t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::GaussianRf(_) => "gaussian_rf",
            FieldKind::LinearMatrix(_) => "linear_matrix",
            FieldKind::StiffTracking(_) => "stiff_tracking",
            FieldKind::Custom { .. } => "custom",
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for FieldKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::GaussianRf(x) => x.fmt(f),
            FieldKind::LinearMatrix(x) => x.fmt(f),
            FieldKind::StiffTracking(x) => x.fmt(f),
            FieldKind::Custom { dim, .. } => f
                .debug_struct("Custom")
                .field("dim", dim)
                .finish_non_exhaustive(),
        }
    }
}

// ---------------------------------------------------------------------------
// Exact and reference flow maps
// ---------------------------------------------------------------------------

/// Exact endpoint of the backward flow from `(z1, t = 1)` to `t = 0`.
///
/// Closed forms exist for the Gaussian field (`z0 = s0 · z1`) and the
/// linear field (`z0 = exp(−A) · z1`). Other kinds have no closed form;
/// use [`reference_endpoint`] for those.
pub fn exact_endpoint<T: Real>(kind: &FieldKind<T>, z1: &StateVector<T>) -> Result<StateVector<T>> {
    if z1.dim() != kind.dim() {
        return Err(Error::invalid(format!(
            "state dim {} does not match field dim {}",
            z1.dim(),
            kind.dim()
        )));
    }
    match kind {
        FieldKind::GaussianRf(f) => Ok(z1.scale(f.s0())),
        FieldKind::LinearMatrix(f) => {
            let flow = f.matrix().scale(-T::one()).expm();
            let z0 = flow.mul_vec(z1);
            if !z0.is_finite() {
                return Err(Error::numeric("flow map overflowed; matrix norm too large"));
            }
            Ok(z0)
        }
        other => Err(Error::invalid(format!(
            "no closed-form endpoint for field kind {:?}",
            other.name()
        ))),
    }
}

/// Brute-force endpoint: plain fixed-step Euler from t = 1 to t = 0 at
/// resolution `steps`. Deliberately self-contained — it shares no code
/// with the samplers it serves as an oracle for.
pub fn reference_endpoint<T: Real>(
    kind: &FieldKind<T>,
    z1: &StateVector<T>,
    steps: usize,
) -> Result<StateVector<T>> {
    if steps == 0 {
        return Err(Error::invalid("steps must be >= 1"));
    }
    if z1.dim() != kind.dim() {
        return Err(Error::invalid(format!(
            "state dim {} does not match field dim {}",
            z1.dim(),
            kind.dim()
        )));
    }
    let n = T::from_usize_exact(steps);
    let h = T::one() / n;
    let mut z = z1.clone();
    for k in 0..steps {
        let t = T::from_usize_exact(steps - k) / n;
        z = z.sub_scaled(h, &kind.velocity(&z, t));
        if !z.is_finite() {
            return Err(Error::numeric("reference integration overflowed").at_step(k));
        }
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// Small dense matrices
// ---------------------------------------------------------------------------

/// Row-major square matrix, sized for the shipped linear fields (d ≤ 4ish).
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::invalid("matrix must have dim >= 1"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::invalid(format!(
                    "matrix must be square: row of length {} in a {}x{} matrix",
                    row.len(),
                    dim,
                    dim
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::numeric("non-finite matrix entry"));
                }
                data.push(v);
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim + col]
    }

    pub fn mul_vec(&self, v: &StateVector<T>) -> StateVector<T> {
        assert_eq!(v.dim(), self.dim, "matrix/vector dimension mismatch");
        let out = (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(T::zero(), |acc, j| acc + self.get(i, j) * v[j])
            })
            .collect();
        StateVector::from_raw(out)
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut data = vec![T::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                for j in 0..d {
                    data[i * d + j] += a * other.get(k, j);
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&a| factor * a).collect(),
        }
    }

    /// Max-abs-row-sum (infinity) norm.
    pub fn norm_inf(&self) -> T {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(T::zero(), |acc, j| acc + self.get(i, j).abs()))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Matrix exponential by scaling and squaring with a Taylor series on
    /// the scaled matrix. Accurate to machine precision for the small,
    /// moderate-norm matrices used here.
    pub fn expm(&self) -> Self {
        let half = T::from_f64_const(0.5);
        let mut squarings = 0i32;
        let mut norm = self.norm_inf();
        while norm > half && squarings < 1000 {
            norm *= half;
            squarings += 1;
        }
        let scaled = self.scale(half.powi(squarings));

        // Taylor on ||B|| <= 0.5: terms shrink at least geometrically.
        let mut result = Self::identity(self.dim);
        let mut term = Self::identity(self.dim);
        for k in 1..=24 {
            term = term.mul_mat(&scaled).scale(T::one() / T::from_usize_exact(k));
            result = result.add(&term);
            if term.norm_inf() < T::epsilon() * result.norm_inf() {
                break;
            }
        }

        for _ in 0..squarings {
            result = result.mul_mat(&result);
        }
        result
    }
}
