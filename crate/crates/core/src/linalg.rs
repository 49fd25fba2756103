//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Storage is `nalgebra::DMatrix<Complex64>`. Spectral work goes through a
//! cyclic complex Jacobi eigensolver, and every matrix function used by the
//! geometry (log, exp, inverse, square root) is applied to the eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GeometryError, Result};

/// Dense complex matrix, any shape.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default lower bound on eigenvalues of a positive definite input.
pub const DEFAULT_EPS_PD: f64 = 1e-12;

/// Maximum tolerated `|M - M^*|` entry (relative to `max(1, |M|_max)`) when
/// accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest exponent `matrix_exp_h` accepts before reporting overflow.
pub const EXP_LIMIT: f64 = 700.0;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A square matrix that is exactly equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Validates and symmetrizes `m`.
    ///
    /// The input must be square, finite and Hermitian up to [`HERMITIAN_TOL`];
    /// the stored matrix is `(M + M^*) / 2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(GeometryError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(GeometryError::InvalidDimension(0));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let residual = hermiticity_residual(&m);
        if residual > HERMITIAN_TOL * max_abs(&m).max(1.0) {
            return Err(GeometryError::NotHermitian { residual });
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without the tolerance check. For results that are
    /// Hermitian by construction and only carry rounding noise.
    pub(crate) fn symmetrize(m: ComplexMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj).scale(0.5))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix(ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Real trace, accumulated with compensated summation.
    pub fn trace(&self) -> f64 {
        compensated_sum((0..self.dim()).map(|i| self.0[(i, i)].re))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix(self.0.scale(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(HermitianMatrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(HermitianMatrix(&self.0 - &other.0))
    }

    /// Subtracts `(Tr M / n) I`, leaving an exactly traceless diagonal sum
    /// up to one final rounding.
    pub fn traceless_part(&self) -> Self {
        let n = self.dim();
        let mean = self.trace() / n as f64;
        let mut m = self.0.clone();
        for i in 0..n {
            m[(i, i)].re -= mean;
        }
        HermitianMatrix(m)
    }

    /// `U M U^*`, symmetrized.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_same_dim(self.dim(), u.nrows())?;
        if !u.is_square() {
            return Err(GeometryError::NotSquare {
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        Ok(Self::symmetrize(u * &self.0 * u.adjoint()))
    }
}

/// `max |M_ij - conj(M_ji)|`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Entrywise max-abs difference. Panics on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Neumaier compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(GeometryError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Spectral decomposition `M = U diag(λ) U^*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `U diag(f(λ)) U^*`.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = u.nrows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, w) in weights.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * *w;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        HermitianMatrix(out)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Sweeps until the off-diagonal Frobenius norm is below `1e-13` times the
/// Frobenius norm of the input, or fails after 100 sweeps.
pub fn hermitian_eig(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n, n);
    let scale = a.norm();

    if scale > 0.0 {
        let mut converged = false;
        let mut off = off_diagonal_norm(&a);
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off <= JACOBI_TOL * scale {
                converged = true;
                // convergence is quadratic, so one more sweep takes the
                // remainder to rounding level; logarithms of small
                // eigenvalues amplify whatever is left
                jacobi_sweep(&mut a, &mut v);
                break;
            }
            jacobi_sweep(&mut a, &mut v);
            off = off_diagonal_norm(&a);
        }
        if !converged && off > JACOBI_TOL * scale {
            return Err(GeometryError::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off_diagonal: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn jacobi_sweep(a: &mut ComplexMatrix, v: &mut ComplexMatrix) {
    let n = a.nrows();
    for p in 0..n {
        for q in (p + 1)..n {
            jacobi_rotate(a, v, p, q);
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) R(θ)` acting
/// on rows/columns `p, q`, and accumulates `V <- V U`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Principal logarithm of a positive definite matrix, default threshold.
pub fn matrix_log_pd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    matrix_log_pd_eps(m, DEFAULT_EPS_PD)
}

/// Principal logarithm; rejects inputs whose smallest eigenvalue is `<= eps`.
pub fn matrix_log_pd_eps(m: &HermitianMatrix, eps: f64) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(m)?;
    log_from_eig(&eig, eps)
}

pub(crate) fn log_from_eig(eig: &EigenDecomposition, eps: f64) -> Result<HermitianMatrix> {
    let min = eig.min_eigenvalue();
    if !(min > eps) {
        return Err(GeometryError::NotPositiveDefinite {
            min_eigenvalue: min,
            eps,
        });
    }
    Ok(eig.map_spectrum(f64::ln))
}

/// Matrix exponential of a Hermitian matrix.
pub fn matrix_exp_h(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(m)?;
    let top = eig.max_eigenvalue();
    if top > EXP_LIMIT {
        return Err(GeometryError::Overflow { exponent: top });
    }
    Ok(eig.map_spectrum(f64::exp))
}

/// `e^X / Tr e^X`, evaluated with the spectrum shifted by its maximum.
///
/// Fails with `Overflow` when the spectral spread exceeds [`EXP_LIMIT`],
/// since the smallest weight would no longer be representable.
pub fn normalized_exp(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(x)?;
    let top = eig.max_eigenvalue();
    let spread = top - eig.min_eigenvalue();
    if !spread.is_finite() || spread > EXP_LIMIT {
        return Err(GeometryError::Overflow { exponent: spread });
    }
    let partition = compensated_sum(eig.eigenvalues.iter().map(|l| (l - top).exp()));
    Ok(eig.map_spectrum(|l| (l - top).exp() / partition))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Hilbert-Schmidt inner product `Tr(A^* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Real part of `Tr(A B)` for Hermitian `A, B`.
pub fn hs_inner_real(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    check_same_dim(a.dim(), b.dim())?;
    let n = a.dim();
    let am = a.as_matrix();
    let bm = b.as_matrix();
    Ok(compensated_sum((0..n).flat_map(|i| {
        (0..n).map(move |j| (am[(i, j)].conj() * bm[(i, j)]).re)
    })))
}

fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Seeded random full-rank density matrix.
///
/// `(G G^* / Tr(G G^*) + 1e-3 I)` renormalized to unit trace, with `G`
/// complex Gaussian.
pub fn random_density(dim: usize, seed: u64) -> Result<HermitianMatrix> {
    if dim < 2 {
        return Err(GeometryError::InvalidDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim, &mut rng);
    let gg = HermitianMatrix::symmetrize(&g * g.adjoint());
    let tr = gg.trace();
    let mut m = gg.scale(1.0 / tr).into_matrix();
    for i in 0..dim {
        m[(i, i)].re += 1e-3;
    }
    let m = HermitianMatrix(m);
    let tr = m.trace();
    Ok(m.scale(1.0 / tr))
}

/// Seeded Haar-random unitary: Gram-Schmidt (twice) on the columns of a
/// complex Gaussian matrix, which yields the positive-diagonal QR factor.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(GeometryError::InvalidDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = gaussian_matrix(dim, &mut rng);
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..dim).map(|r| q[(r, k)].conj() * q[(r, j)]).sum();
                for r in 0..dim {
                    let qrk = q[(r, k)];
                    q[(r, j)] -= proj * qrk;
                }
            }
        }
        let norm = (0..dim).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..dim {
            q[(r, j)] /= norm;
        }
    }
    Ok(q)
}

/// `max |U^* U - I|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &ComplexMatrix::identity(n, n))
}

/// Seeded random Hermitian matrix with standard Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HermitianMatrix::symmetrize(gaussian_matrix(dim, &mut rng))
}
