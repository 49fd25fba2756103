//! Superoperators on the Hilbert-Schmidt space of `n×n` matrices.
//!
//! Matrices are vectorized column-major (`vec(A)[i + j n] = A[i][j]`), so
//! left multiplication `L_X` is `I ⊗ X` and right multiplication `R_X` is
//! `X^T ⊗ I`. Under this convention the Hilbert-Schmidt inner product is the
//! standard inner product on `C^{n²}`, and a superoperator is self-adjoint
//! exactly when its matrix is Hermitian.

use nalgebra::DVector;

use crate::error::{GeometryError, Result};
use crate::linalg::{
    self, check_same_dim, hermitian_eig, hermiticity_residual, kron, matrix_log_pd, ComplexMatrix,
    HermitianMatrix,
};
use crate::state::DensityState;

/// Linear map on `n×n` matrices, stored as an `n²×n²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    base_dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(base_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n2 = base_dim * base_dim;
        if matrix.nrows() != n2 || matrix.ncols() != n2 {
            return Err(GeometryError::DimensionMismatch {
                expected: n2,
                found: matrix.nrows(),
            });
        }
        Ok(Superoperator { base_dim, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Superoperator {
            base_dim: n,
            matrix: ComplexMatrix::identity(n * n, n * n),
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_same_dim(self.base_dim, a.nrows())?;
        check_same_dim(self.base_dim, a.ncols())?;
        let out = &self.matrix * vectorize(a);
        Ok(unvectorize(self.base_dim, &out))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Superoperator) -> Result<Self> {
        check_same_dim(self.base_dim, other.base_dim)?;
        Ok(Superoperator {
            base_dim: self.base_dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn sub(&self, other: &Superoperator) -> Result<Self> {
        check_same_dim(self.base_dim, other.base_dim)?;
        Ok(Superoperator {
            base_dim: self.base_dim,
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// Deviation from self-adjointness with respect to the Hilbert-Schmidt
    /// inner product.
    pub fn self_adjoint_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    /// Hilbert-Schmidt inner product of superoperators, `Tr(S^* T)`.
    pub fn hs_inner(&self, other: &Superoperator) -> Result<num_complex::Complex64> {
        check_same_dim(self.base_dim, other.base_dim)?;
        linalg::hs_inner(&self.matrix, &other.matrix)
    }

    /// Spectrum of a self-adjoint superoperator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&HermitianMatrix::new(self.matrix.clone())?)?.eigenvalues)
    }

    /// Principal logarithm of a positive self-adjoint superoperator,
    /// computed from the eigendecomposition of its `n²×n²` matrix.
    pub fn log_positive(&self) -> Result<Superoperator> {
        let h = HermitianMatrix::symmetrize(self.matrix.clone());
        Ok(Superoperator {
            base_dim: self.base_dim,
            matrix: matrix_log_pd(&h)?.into_matrix(),
        })
    }
}

/// Column-major vectorization.
pub fn vectorize(a: &ComplexMatrix) -> DVector<num_complex::Complex64> {
    DVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(n: usize, v: &DVector<num_complex::Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(n, n, v.as_slice())
}

fn require_square(x: &ComplexMatrix) -> Result<usize> {
    if !x.is_square() {
        return Err(GeometryError::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    Ok(x.nrows())
}

/// `L_X : A ↦ X A`.
pub fn left_mult(x: &ComplexMatrix) -> Result<Superoperator> {
    let n = require_square(x)?;
    Ok(Superoperator {
        base_dim: n,
        matrix: kron(&ComplexMatrix::identity(n, n), x),
    })
}

/// `R_X : A ↦ A X`.
pub fn right_mult(x: &ComplexMatrix) -> Result<Superoperator> {
    let n = require_square(x)?;
    Ok(Superoperator {
        base_dim: n,
        matrix: kron(&x.transpose(), &ComplexMatrix::identity(n, n)),
    })
}

fn inverse(d: &DensityState) -> Result<HermitianMatrix> {
    Ok(hermitian_eig(d.matrix())?.map_spectrum(f64::recip))
}

/// Relative modular operator `Δ_{D1/D2} = L_{D1} R_{D2^{-1}}`, i.e.
/// `A ↦ D1 A D2^{-1}`.
pub fn relative_modular(d1: &DensityState, d2: &DensityState) -> Result<Superoperator> {
    check_same_dim(d1.dim(), d2.dim())?;
    let left = left_mult(d1.matrix().as_matrix())?;
    let right = right_mult(inverse(d2)?.as_matrix())?;
    left.compose(&right)
}

/// `log Δ_{D1/D2}` from the spectral decomposition of the superoperator.
pub fn log_modular(d1: &DensityState, d2: &DensityState) -> Result<Superoperator> {
    relative_modular(d1, d2)?.log_positive()
}

/// `log Δ_{D1/D2}` assembled as `L_{log D1} - R_{log D2}`.
pub fn log_modular_decomposed(d1: &DensityState, d2: &DensityState) -> Result<Superoperator> {
    check_same_dim(d1.dim(), d2.dim())?;
    let left = left_mult(d1.log().as_matrix())?;
    let right = right_mult(d2.log().as_matrix())?;
    left.sub(&right)
}

/// Araki relative entropy `S(D1, D2) = -⟨D1^{1/2}, log Δ_{D2/D1} D1^{1/2}⟩`,
/// in nats.
pub fn relative_entropy(d1: &DensityState, d2: &DensityState) -> Result<f64> {
    check_same_dim(d1.dim(), d2.dim())?;
    let root = hermitian_eig(d1.matrix())?.map_spectrum(f64::sqrt);
    let log_delta = log_modular(d2, d1)?;
    let image = log_delta.apply(root.as_matrix())?;
    Ok(-linalg::hs_inner(root.as_matrix(), &image)?.re)
}

/// Log-ratio inner product written through the logarithms of the modular
/// operators: `(1 / 2n²) ⟨log Δ_A, log Δ_B⟩`.
pub fn inner_via_modular(a: &DensityState, b: &DensityState) -> Result<f64> {
    check_same_dim(a.dim(), b.dim())?;
    let n = a.dim() as f64;
    let la = log_modular(a, a)?;
    let lb = log_modular(b, b)?;
    Ok(la.hs_inner(&lb)?.re / (2.0 * n * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_diff, random_hermitian, random_unitary};
    use crate::state::inner;
    use proptest::prelude::*;

    fn rand_state(n: usize, seed: u64) -> DensityState {
        DensityState::random(n, seed).unwrap()
    }

    fn diag_state(p: &[f64]) -> DensityState {
        DensityState::new(HermitianMatrix::from_diagonal(p)).unwrap()
    }

    fn rand_matrix(n: usize, seed: u64) -> ComplexMatrix {
        random_unitary(n, seed).unwrap() * random_hermitian(n, seed + 1).as_matrix()
    }

    #[test]
    fn vectorization_round_trip() {
        let a = rand_matrix(3, 1);
        let v = vectorize(&a);
        assert_eq!(v[1], a[(1, 0)]);
        assert_eq!(v[3], a[(0, 1)]);
        assert_eq!(unvectorize(3, &v), a);
    }

    #[test]
    fn left_mult_examples() {
        let id = ComplexMatrix::identity(3, 3);
        assert_eq!(left_mult(&id).unwrap(), Superoperator::identity(3));
        let x = rand_matrix(3, 2);
        let y = rand_matrix(3, 3);
        let a = rand_matrix(3, 4);
        let applied = left_mult(&x).unwrap().apply(&a).unwrap();
        assert!(max_abs_diff(&applied, &(&x * &a)) < 1e-13);
        let lxly = left_mult(&x)
            .unwrap()
            .compose(&left_mult(&y).unwrap())
            .unwrap();
        let lxy = left_mult(&(&x * &y)).unwrap();
        assert!(max_abs_diff(lxly.matrix(), lxy.matrix()) < 1e-12);
    }

    #[test]
    fn right_mult_examples() {
        let id = ComplexMatrix::identity(4, 4);
        assert_eq!(right_mult(&id).unwrap(), Superoperator::identity(4));
        let x = rand_matrix(3, 5);
        let y = rand_matrix(3, 6);
        let a = rand_matrix(3, 7);
        let applied = right_mult(&x).unwrap().apply(&a).unwrap();
        assert!(max_abs_diff(&applied, &(&a * &x)) < 1e-13);
        let rxry = right_mult(&x)
            .unwrap()
            .compose(&right_mult(&y).unwrap())
            .unwrap();
        let ryx = right_mult(&(&y * &x)).unwrap();
        assert!(max_abs_diff(rxry.matrix(), ryx.matrix()) < 1e-12);
        let lx = left_mult(&x).unwrap();
        let ry = right_mult(&y).unwrap();
        let commutator = lx
            .compose(&ry)
            .unwrap()
            .sub(&ry.compose(&lx).unwrap())
            .unwrap();
        assert!(max_abs(commutator.matrix()) <= 1e-12);
    }

    #[test]
    fn multiplications_by_hermitian_are_self_adjoint() {
        let h = random_hermitian(4, 9);
        assert!(left_mult(h.as_matrix()).unwrap().self_adjoint_residual() <= 1e-11);
        assert!(right_mult(h.as_matrix()).unwrap().self_adjoint_residual() <= 1e-11);
        assert!(left_mult(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn relative_modular_examples() {
        let u = DensityState::uniform(3).unwrap();
        let delta = relative_modular(&u, &u).unwrap();
        assert!(max_abs_diff(delta.matrix(), Superoperator::identity(3).matrix()) < 1e-14);

        let d1 = rand_state(3, 10);
        let d2 = rand_state(3, 11);
        let a = rand_matrix(3, 12);
        let applied = relative_modular(&d1, &d2).unwrap().apply(&a).unwrap();
        let d2_inv = d2.matrix().as_matrix().clone().try_inverse().unwrap();
        let direct = d1.matrix().as_matrix() * &a * d2_inv;
        assert!(max_abs_diff(&applied, &direct) < 1e-11 * max_abs(&direct).max(1.0));

        let p = [0.5, 0.3, 0.2];
        let q = [0.1, 0.6, 0.3];
        let mut spectrum = relative_modular(&diag_state(&p), &diag_state(&q))
            .unwrap()
            .eigenvalues()
            .unwrap();
        let mut expected: Vec<f64> = p
            .iter()
            .flat_map(|pi| q.iter().map(move |qj| pi / qj))
            .collect();
        spectrum.sort_by(f64::total_cmp);
        expected.sort_by(f64::total_cmp);
        for (s, e) in spectrum.iter().zip(&expected) {
            assert!((s - e).abs() < 1e-12 * e.max(1.0));
        }

        let positive = relative_modular(&d1, &d1).unwrap().eigenvalues().unwrap();
        assert!(positive.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn log_modular_examples() {
        let u = DensityState::uniform(2).unwrap();
        assert!(max_abs(log_modular(&u, &u).unwrap().matrix()) < 1e-14);

        for seed in 0..5 {
            let d1 = rand_state(3, seed);
            let d2 = rand_state(3, seed + 100);
            let spectral = log_modular(&d1, &d2).unwrap();
            let split = log_modular_decomposed(&d1, &d2).unwrap();
            assert!(max_abs_diff(spectral.matrix(), split.matrix()) <= 1e-10);
        }

        let p = [0.7, 0.2, 0.1];
        let q = [0.25, 0.25, 0.5];
        let l = log_modular(&diag_state(&p), &diag_state(&q)).unwrap();
        let n = 3;
        for (j, qj) in q.iter().enumerate() {
            for (i, pi) in p.iter().enumerate() {
                let idx = i + j * n;
                let expected = pi.ln() - qj.ln();
                assert!((l.matrix()[(idx, idx)].re - expected).abs() < 1e-12);
            }
        }
        let off: f64 = (0..9)
            .flat_map(|r| (0..9).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| l.matrix()[(r, c)].norm())
            .fold(0.0, f64::max);
        assert!(off < 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let d = rand_state(3, 21);
        assert!(relative_entropy(&d, &d).unwrap().abs() < 1e-12);

        let p = [0.6f64, 0.3, 0.1];
        let q = [0.2, 0.5, 0.3];
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        let s = relative_entropy(&diag_state(&p), &diag_state(&q)).unwrap();
        assert!((s - kl).abs() < 1e-10);

        for seed in 0..5 {
            let d1 = rand_state(4, seed);
            let d2 = rand_state(4, seed + 7);
            let diff = d1.log().sub(d2.log()).unwrap();
            let standard = (d1.matrix().as_matrix() * diff.as_matrix()).trace().re;
            let s = relative_entropy(&d1, &d2).unwrap();
            assert!((s - standard).abs() < 1e-9);
            assert!(s >= -1e-12);
        }
        assert!(relative_entropy(&rand_state(2, 0), &rand_state(3, 0)).is_err());
    }

    #[test]
    fn inner_via_modular_examples() {
        let u = DensityState::uniform(3).unwrap();
        assert!(inner_via_modular(&u, &rand_state(3, 1)).unwrap().abs() < 1e-14);
        for n in 2..=4 {
            for seed in 0..5 {
                let a = rand_state(n, seed);
                let b = rand_state(n, seed + 50);
                let m = inner_via_modular(&a, &b).unwrap();
                assert!((m - inner(&a, &b).unwrap()).abs() <= 1e-8);
            }
        }
        // qubit pair at angle θ: artanh(R) artanh(r) cos θ
        let (big_r, r, theta) = (0.6f64, 0.45f64, 0.7f64);
        let d1 = diag_state(&[(1.0 + big_r) / 2.0, (1.0 - big_r) / 2.0]);
        let off = r * theta.sin() / 2.0;
        let d2 = DensityState::new(HermitianMatrix::symmetrize(ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                (1.0 + r * theta.cos()) / 2.0,
                off,
                off,
                (1.0 - r * theta.cos()) / 2.0,
            ]
            .map(|x| num_complex::Complex64::new(x, 0.0)),
        )))
        .unwrap();
        let expected = big_r.atanh() * r.atanh() * theta.cos();
        assert!((inner_via_modular(&d1, &d2).unwrap() - expected).abs() < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn modular_operator_is_positive(seed in any::<u64>(), n in 2usize..=4) {
            let d = rand_state(n, seed);
            let delta = relative_modular(&d, &d).unwrap();
            prop_assert!(delta.self_adjoint_residual() < 1e-9);
            prop_assert!(delta.eigenvalues().unwrap().iter().all(|&l| l > 0.0));
        }

        #[test]
        fn klein_inequality(seed in any::<u64>(), n in 2usize..=4) {
            let d1 = rand_state(n, seed);
            let d2 = rand_state(n, seed.wrapping_mul(31).wrapping_add(7));
            prop_assert!(relative_entropy(&d1, &d2).unwrap() >= -1e-12);
        }
    }
}
