//! Log-ratio geometry of the open probability simplex.
//!
//! This is the commutative special case of the state-space geometry and is
//! kept as a separate, matrix-free implementation so it can serve as a
//! reference for diagonal states.

use crate::error::{GeometryError, Result};
use crate::linalg::{HermitianMatrix, DEFAULT_EPS_PD};
use crate::state::DensityState;

/// Strictly positive probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    /// Accepts any strictly positive vector (entries above `eps_pd` after
    /// normalization) and rescales it to unit sum.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(GeometryError::InvalidDimension(components.len()));
        }
        if components.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(GeometryError::InvalidSimplex(
                "components must be finite and strictly positive".into(),
            ));
        }
        let total: f64 = components.iter().sum();
        let normalized: Vec<f64> = components.iter().map(|p| p / total).collect();
        if normalized.iter().any(|&p| p <= DEFAULT_EPS_PD) {
            return Err(GeometryError::InvalidSimplex(format!(
                "component below {DEFAULT_EPS_PD:e} after normalization"
            )));
        }
        Ok(SimplexVector(normalized))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

fn check_len(p: &SimplexVector, q: &SimplexVector) -> Result<()> {
    if p.len() != q.len() {
        return Err(GeometryError::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(())
}

/// Componentwise product, renormalized.
pub fn c_perturb(p: &SimplexVector, q: &SimplexVector) -> Result<SimplexVector> {
    check_len(p, q)?;
    SimplexVector::new(p.0.iter().zip(&q.0).map(|(a, b)| a * b).collect())
}

/// Componentwise power, renormalized. Evaluated through logs shifted by their
/// maximum so large `|λ|` does not underflow prematurely.
pub fn c_power(lambda: f64, p: &SimplexVector) -> Result<SimplexVector> {
    let logs: Vec<f64> = p.0.iter().map(|x| lambda * x.ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SimplexVector::new(logs.iter().map(|l| (l - top).exp()).collect())
}

pub fn c_negate(p: &SimplexVector) -> Result<SimplexVector> {
    c_power(-1.0, p)
}

/// Centered form of the log-ratio inner product:
/// `(1/n) Σ log p_i log q_i - (1/n²) (Σ log p_i)(Σ log q_i)`,
/// evaluated as `(1/n) Σ clr(p)_i clr(q)_i`.
pub fn c_inner(p: &SimplexVector, q: &SimplexVector) -> Result<f64> {
    check_len(p, q)?;
    let n = p.len() as f64;
    let cross: f64 = c_clr(p).iter().zip(c_clr(q)).map(|(a, b)| a * b).sum();
    Ok(cross / n)
}

pub fn c_norm(p: &SimplexVector) -> Result<f64> {
    Ok(c_inner(p, p)?.max(0.0).sqrt())
}

/// Centered log-ratio vector, `log p_i - mean(log p)`.
pub fn c_clr(p: &SimplexVector) -> Vec<f64> {
    let logs: Vec<f64> = p.0.iter().map(|x| x.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    logs.iter().map(|l| l - mean).collect()
}

/// `(t ⊙ p) ⊕ ((1 - t) ⊙ q)`.
pub fn c_arc(p: &SimplexVector, q: &SimplexVector, t: f64) -> Result<SimplexVector> {
    c_perturb(&c_power(t, p)?, &c_power(1.0 - t, q)?)
}

/// `diag(p)` as a state.
pub fn embed_diagonal(p: &SimplexVector) -> Result<DensityState> {
    DensityState::new(HermitianMatrix::from_diagonal(&p.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{clr, inner, perturb, power};
    use proptest::prelude::*;

    fn sv(p: &[f64]) -> SimplexVector {
        SimplexVector::new(p.to_vec()).unwrap()
    }

    fn close(a: &SimplexVector, b: &SimplexVector, tol: f64) -> bool {
        a.components()
            .iter()
            .zip(b.components())
            .all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Pairwise double-sum form `(1/2n²) Σ_ij log(p_i/p_j) log(q_i/q_j)`.
    ///
    /// With a `1/(2n)` prefactor the sum would be `n` times the centered
    /// form. `1/(2n²)` makes diagonal states embed isometrically.
    fn c_inner_pairwise(p: &SimplexVector, q: &SimplexVector) -> f64 {
        let n = p.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (p.0[i] / p.0[j]).ln() * (q.0[i] / q.0[j]).ln();
            }
        }
        acc / (2.0 * (n * n) as f64)
    }

    fn simplex(n: usize) -> impl Strategy<Value = SimplexVector> {
        proptest::collection::vec(0.01f64..1.0, n)
            .prop_map(SimplexVector::new)
            .prop_map(Result::unwrap)
    }

    #[test]
    fn validation() {
        assert!(SimplexVector::new(vec![1.0]).is_err());
        assert!(SimplexVector::new(vec![0.5, 0.0]).is_err());
        assert!(SimplexVector::new(vec![0.5, -0.1]).is_err());
        assert!(SimplexVector::new(vec![1.0, 1e-14]).is_err());
        let p = sv(&[2.0, 6.0]);
        assert_eq!(p.components(), &[0.25, 0.75]);
    }

    #[test]
    fn perturb_examples() {
        let p = sv(&[0.2, 0.3, 0.5]);
        assert!(close(
            &c_perturb(&p, &SimplexVector::uniform(3).unwrap()).unwrap(),
            &p,
            1e-15
        ));
        let s = c_perturb(&sv(&[0.8, 0.2]), &sv(&[0.2, 0.8])).unwrap();
        assert_eq!(s.components(), &[0.5, 0.5]);
        assert!(matches!(
            c_perturb(&p, &sv(&[0.5, 0.5])),
            Err(GeometryError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn power_examples() {
        let p = sv(&[0.8, 0.2]);
        assert!(close(&c_power(1.0, &p).unwrap(), &p, 1e-15));
        assert!(close(
            &c_power(0.0, &p).unwrap(),
            &SimplexVector::uniform(2).unwrap(),
            0.0
        ));
        let sq = c_power(2.0, &p).unwrap();
        assert!((sq.components()[0] - 16.0 / 17.0).abs() < 1e-15);
        assert!((sq.components()[1] - 1.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn inner_examples() {
        let q = sv(&[0.1, 0.6, 0.3]);
        assert!(
            c_inner(&SimplexVector::uniform(3).unwrap(), &q)
                .unwrap()
                .abs()
                < 1e-15
        );
        for seed in 1..20u32 {
            let p = sv(&(0..5)
                .map(|i| 1.0 + ((seed * 7 + i) as f64).sin())
                .collect::<Vec<_>>());
            let q = sv(&(0..5)
                .map(|i| 1.0 + ((seed * 3 + 2 * i) as f64).cos())
                .collect::<Vec<_>>());
            let centered = c_inner(&p, &q).unwrap();
            assert!((centered - c_inner_pairwise(&p, &q)).abs() < 1e-12);
            let uncentered = {
                let lp: Vec<f64> = p.components().iter().map(|x| x.ln()).collect();
                let lq: Vec<f64> = q.components().iter().map(|x| x.ln()).collect();
                let cross: f64 = lp.iter().zip(&lq).map(|(a, b)| a * b).sum();
                cross / 5.0 - lp.iter().sum::<f64>() * lq.iter().sum::<f64>() / 25.0
            };
            assert!((centered - uncentered).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding_examples() {
        let u = embed_diagonal(&SimplexVector::uniform(4).unwrap()).unwrap();
        assert!(u.max_abs_diff(&DensityState::uniform(4).unwrap()) == 0.0);
        let p = sv(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(
            embed_diagonal(&p).unwrap().matrix().diagonal(),
            p.components()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn diagonal_embedding_commutes(
            (p, q) in (2usize..=6).prop_flat_map(|n| (simplex(n), simplex(n))),
            lambda in -3.0f64..3.0,
        ) {
            let (dp, dq) = (embed_diagonal(&p).unwrap(), embed_diagonal(&q).unwrap());
            let sum = perturb(&dp, &dq).unwrap();
            prop_assert!(sum.max_abs_diff(&embed_diagonal(&c_perturb(&p, &q).unwrap()).unwrap()) <= 1e-12);
            let pw = power(lambda, &dp).unwrap();
            prop_assert!(pw.max_abs_diff(&embed_diagonal(&c_power(lambda, &p).unwrap()).unwrap()) <= 1e-12);
            prop_assert!((inner(&dp, &dq).unwrap() - c_inner(&p, &q).unwrap()).abs() <= 1e-12);
            let h = clr(&dp).unwrap().matrix().diagonal();
            for (a, b) in h.iter().zip(c_clr(&p)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn classical_axioms(p in simplex(4), q in simplex(4), r in simplex(4), l in -2.0f64..2.0, m in -2.0f64..2.0) {
            let tol = 1e-12;
            prop_assert!(close(&c_perturb(&p, &q).unwrap(), &c_perturb(&q, &p).unwrap(), tol));
            let lhs = c_perturb(&c_perturb(&p, &q).unwrap(), &r).unwrap();
            let rhs = c_perturb(&p, &c_perturb(&q, &r).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs, tol));
            let z = c_perturb(&p, &c_negate(&p).unwrap()).unwrap();
            prop_assert!(close(&z, &SimplexVector::uniform(4).unwrap(), tol));
            let lhs = c_power(l, &c_perturb(&p, &q).unwrap()).unwrap();
            let rhs = c_perturb(&c_power(l, &p).unwrap(), &c_power(l, &q).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs, tol));
            let lhs = c_power(l + m, &p).unwrap();
            let rhs = c_perturb(&c_power(l, &p).unwrap(), &c_power(m, &p).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs, tol));
            prop_assert!((c_inner(&p, &q).unwrap() - c_inner_pairwise(&p, &q)).abs() <= tol);
        }
    }
}
