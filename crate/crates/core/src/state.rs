//! Log-ratio vector-space operations on the interior of the state space.
//!
//! A [`DensityState`] is a positive definite, unit-trace Hermitian matrix. Its
//! matrix logarithm is computed once at construction and reused by every
//! operation. Perturbation and powering return `e^X / Tr e^X` for the
//! appropriate Hermitian exponent `X`, so their results are always states.

use std::borrow::Cow;

use crate::error::{GeometryError, Result};
use crate::linalg::{
    self, check_same_dim, hermitian_eig, log_from_eig, normalized_exp, unitarity_residual,
    ComplexMatrix, HermitianMatrix, DEFAULT_EPS_PD,
};

/// Maximum `|Tr D - 1|` accepted when constructing a state.
pub const TRACE_TOL: f64 = 1e-10;

/// Maximum `|U^* U - I|` accepted for a unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Maximum `|Tr H|` for a Hamiltonian flagged traceless.
pub const TRACELESS_TOL: f64 = 1e-10;

/// A point of the open state space: positive definite with unit trace.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: HermitianMatrix,
    log: HermitianMatrix,
    min_eigenvalue: f64,
}

impl DensityState {
    /// Validates a unit-trace positive definite matrix with the default
    /// positivity threshold.
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        Self::with_eps(matrix, DEFAULT_EPS_PD)
    }

    /// As [`DensityState::new`] with a custom positivity threshold.
    pub fn with_eps(matrix: HermitianMatrix, eps: f64) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(GeometryError::InvalidDimension(matrix.dim()));
        }
        let trace = matrix.trace();
        let deviation = (trace - 1.0).abs();
        if !(deviation <= TRACE_TOL) {
            return Err(GeometryError::TraceDeviation { deviation });
        }
        // rescaling a trace that is already 1 up to rounding only moves ulps
        // and would make reloading a saved state change it
        if deviation <= matrix.dim() as f64 * f64::EPSILON {
            return Self::build(matrix, eps);
        }
        Self::build(matrix.scale(1.0 / trace), eps)
    }

    /// Normalizes an arbitrary positive definite matrix onto its ray's
    /// unit-trace representative.
    pub fn from_positive(matrix: &HermitianMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(GeometryError::InvalidDimension(matrix.dim()));
        }
        let trace = matrix.trace();
        if !(trace > 0.0) {
            return Err(GeometryError::NotPositiveDefinite {
                min_eigenvalue: trace,
                eps: DEFAULT_EPS_PD,
            });
        }
        let scaled = matrix.scale(1.0 / trace);
        // the threshold applies to the caller's matrix, not its normalization
        let eig = hermitian_eig(matrix)?;
        if !(eig.min_eigenvalue() > DEFAULT_EPS_PD) {
            return Err(GeometryError::NotPositiveDefinite {
                min_eigenvalue: eig.min_eigenvalue(),
                eps: DEFAULT_EPS_PD,
            });
        }
        Self::build(scaled, 0.0)
    }

    /// Computed results: already unit trace up to rounding, only strict
    /// positivity is required.
    pub(crate) fn from_computed(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        Self::build(matrix.scale(1.0 / trace), 0.0)
    }

    fn build(matrix: HermitianMatrix, eps: f64) -> Result<Self> {
        let eig = hermitian_eig(&matrix)?;
        let log = log_from_eig(&eig, eps)?;
        Ok(DensityState {
            min_eigenvalue: eig.min_eigenvalue(),
            matrix,
            log,
        })
    }

    /// The maximally mixed state `I/n`, the zero vector of the geometry.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(GeometryError::InvalidDimension(n));
        }
        Self::new(HermitianMatrix::identity(n).scale(1.0 / n as f64))
    }

    pub fn random(n: usize, seed: u64) -> Result<Self> {
        Self::new(linalg::random_density(n, seed)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// Matrix logarithm of the state.
    pub fn log(&self) -> &HermitianMatrix {
        &self.log
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Entrywise max-abs difference of the matrices.
    pub fn max_abs_diff(&self, other: &DensityState) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        linalg::max_abs_diff(self.matrix.as_matrix(), other.matrix.as_matrix())
    }
}

/// Anything the operations accept as an element of a positive ray.
pub trait PositiveOperand {
    fn operand_dim(&self) -> usize;
    /// Matrix logarithm of the operand.
    fn log_pd(&self) -> Result<Cow<'_, HermitianMatrix>>;
}

impl PositiveOperand for DensityState {
    fn operand_dim(&self) -> usize {
        self.dim()
    }

    fn log_pd(&self) -> Result<Cow<'_, HermitianMatrix>> {
        Ok(Cow::Borrowed(&self.log))
    }
}

impl PositiveOperand for HermitianMatrix {
    fn operand_dim(&self) -> usize {
        self.dim()
    }

    fn log_pd(&self) -> Result<Cow<'_, HermitianMatrix>> {
        Ok(Cow::Owned(linalg::matrix_log_pd(self)?))
    }
}

/// A Hermitian generator. Traceless ones are the images of `clr`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: HermitianMatrix,
    traceless: bool,
}

impl Hamiltonian {
    pub fn new(matrix: HermitianMatrix) -> Self {
        Hamiltonian {
            matrix,
            traceless: false,
        }
    }

    /// Accepts `matrix` as traceless if `|Tr| <= 1e-10`.
    pub fn traceless(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if !(trace.abs() <= TRACELESS_TOL) {
            return Err(GeometryError::NotTraceless { trace });
        }
        Ok(Hamiltonian {
            matrix,
            traceless: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    pub fn scale(&self, c: f64) -> Self {
        Hamiltonian {
            matrix: self.matrix.scale(c),
            traceless: self.traceless,
        }
    }

    pub fn add(&self, other: &Hamiltonian) -> Result<Self> {
        Ok(Hamiltonian {
            matrix: self.matrix.add(&other.matrix)?,
            traceless: self.traceless && other.traceless,
        })
    }
}

/// Inverse temperature of a Gibbs state; strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(GeometryError::InvalidTemperature(beta));
        }
        Ok(InverseTemperature(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Perturbation `A ⊕ B = e^{log A + log B} / Tr e^{log A + log B}`.
pub fn perturb<A, B>(a: &A, b: &B) -> Result<DensityState>
where
    A: PositiveOperand + ?Sized,
    B: PositiveOperand + ?Sized,
{
    check_same_dim(a.operand_dim(), b.operand_dim())?;
    let exponent = a.log_pd()?.add(&*b.log_pd()?)?;
    DensityState::from_computed(normalized_exp(&exponent)?)
}

/// Powering `λ ⊙ A = e^{λ log A} / Tr e^{λ log A}`, any real `λ`.
pub fn power<A: PositiveOperand + ?Sized>(lambda: f64, a: &A) -> Result<DensityState> {
    if !lambda.is_finite() {
        return Err(GeometryError::InvalidArgument(format!(
            "non-finite scalar {lambda}"
        )));
    }
    let exponent = a.log_pd()?.scale(lambda);
    DensityState::from_computed(normalized_exp(&exponent)?)
}

/// Additive inverse `⊖A = (-1) ⊙ A`.
pub fn negate<A: PositiveOperand + ?Sized>(a: &A) -> Result<DensityState> {
    power(-1.0, a)
}

/// `A ⊖ B = A ⊕ (⊖B)`.
pub fn subtract<A, B>(a: &A, b: &B) -> Result<DensityState>
where
    A: PositiveOperand + ?Sized,
    B: PositiveOperand + ?Sized,
{
    check_same_dim(a.operand_dim(), b.operand_dim())?;
    perturb(a, &negate(b)?)
}

/// `⟨A, B⟩ = (1/n) Tr(log A log B) - (1/n²) Tr(log A) Tr(log B)`.
///
/// Evaluated as `(1/n) Tr(clr A clr B)`, which avoids the cancellation
/// between the two terms near the zero vector.
pub fn inner<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: PositiveOperand + ?Sized,
    B: PositiveOperand + ?Sized,
{
    check_same_dim(a.operand_dim(), b.operand_dim())?;
    let ca = a.log_pd()?.traceless_part();
    let cb = b.log_pd()?.traceless_part();
    Ok(linalg::hs_inner_real(&ca, &cb)? / ca.dim() as f64)
}

/// Induced norm, the information evidence of a state.
pub fn norm<A: PositiveOperand + ?Sized>(a: &A) -> Result<f64> {
    Ok(inner(a, a)?.max(0.0).sqrt())
}

/// `‖A ⊖ B‖`.
pub fn distance<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: PositiveOperand + ?Sized,
    B: PositiveOperand + ?Sized,
{
    norm(&subtract(a, b)?)
}

/// Centered log-ratio `clr A = log A - (Tr log A / n) I`.
pub fn clr<A: PositiveOperand + ?Sized>(a: &A) -> Result<Hamiltonian> {
    let centered = a.log_pd()?.traceless_part();
    Ok(Hamiltonian {
        matrix: centered,
        traceless: true,
    })
}

/// Gibbs state `e^{-βH} / Tr e^{-βH}`.
pub fn gibbs(h: &Hamiltonian, beta: InverseTemperature) -> Result<DensityState> {
    DensityState::from_computed(normalized_exp(&h.matrix.scale(-beta.value()))?)
}

/// Inverse of `clr`: `e^X / Tr e^X` (the matrix softmax).
pub fn clr_inverse(x: &Hamiltonian) -> Result<DensityState> {
    DensityState::from_computed(normalized_exp(&x.matrix)?)
}

/// Point at parameter `t` of the arc `(t ⊙ A) ⊕ ((1 - t) ⊙ B)`; `t = 1`
/// gives `A`, `t = 0` gives `B`.
pub fn arc(a: &DensityState, b: &DensityState, t: f64) -> Result<DensityState> {
    check_same_dim(a.dim(), b.dim())?;
    if !(0.0..=1.0).contains(&t) {
        return Err(GeometryError::InvalidArgument(format!(
            "arc parameter {t} outside [0, 1]"
        )));
    }
    perturb(&power(t, a)?, &power(1.0 - t, b)?)
}

/// Composite state `A ⊗ B`.
pub fn tensor(a: &DensityState, b: &DensityState) -> Result<DensityState> {
    let k = linalg::kron(a.matrix().as_matrix(), b.matrix().as_matrix());
    DensityState::from_computed(HermitianMatrix::symmetrize(k))
}

/// Unitary conjugation `U A U^*`.
pub fn conjugate(a: &DensityState, u: &ComplexMatrix) -> Result<DensityState> {
    check_same_dim(a.dim(), u.nrows())?;
    if !u.is_square() {
        return Err(GeometryError::NotSquare {
            rows: u.nrows(),
            cols: u.ncols(),
        });
    }
    let residual = unitarity_residual(u);
    if !(residual <= UNITARY_TOL) {
        return Err(GeometryError::NotUnitary { residual });
    }
    DensityState::from_computed(a.matrix().conjugate_by(u)?)
}
