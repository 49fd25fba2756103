//! Orthonormal basis of the `n`-level state space and coordinates in it.
//!
//! The basis states are the normalized exponentials of `n² - 1` traceless
//! Hamiltonians that are orthonormal under `(1/n) Tr(H K)`:
//!
//! * `A(k,l) = a (E_kl + E_lk)` for `k < l`,
//! * `B(k,l) = i a (E_kl - E_lk)` for `k < l`,
//! * `C(k) = α_k diag(1,…,1, -(k+1), 0,…,0, 1)` (k leading ones) for `k <= n-2`,
//! * `C(n-1) = a (E_11 - E_nn)`,
//!
//! with `a = sqrt(n/2)` and `α_k = sqrt(n / (k² + 3k + 2))`. Because `clr` is an
//! isometry onto the traceless matrices, their images under `clr^{-1}` are
//! orthonormal for the log-ratio inner product.
//!
//! Coordinates are ordered A-block, B-block, C-block, each lexicographic.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{GeometryError, Result};
use crate::linalg::{hs_inner_real, ComplexMatrix, HermitianMatrix};
use crate::state::{clr, clr_inverse, DensityState, Hamiltonian};

/// Label of a basis element; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// Real off-diagonal generator, `k < l`.
    A(usize, usize),
    /// Imaginary off-diagonal generator, `k < l`.
    B(usize, usize),
    /// Diagonal generator, `1 <= k <= n-1`.
    C(usize),
}

impl BasisLabel {
    pub fn is_valid(&self, n: usize) -> bool {
        match *self {
            BasisLabel::A(k, l) | BasisLabel::B(k, l) => 1 <= k && k < l && l <= n,
            BasisLabel::C(k) => 1 <= k && k < n,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(GeometryError::InvalidDimension(n));
        }
        if !self.is_valid(n) {
            return Err(GeometryError::InvalidLabel {
                label: self.to_string(),
                dim: n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::A(k, l) => write!(f, "A{k}_{l}"),
            BasisLabel::B(k, l) => write!(f, "B{k}_{l}"),
            BasisLabel::C(k) => write!(f, "C{k}"),
        }
    }
}

impl FromStr for BasisLabel {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GeometryError::InvalidArgument(format!("malformed basis label {s:?}"));
        let (kind, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let pair = |rest: &str| -> Result<(usize, usize)> {
            let (k, l) = rest.split_once('_').ok_or_else(bad)?;
            Ok((k.parse().map_err(|_| bad())?, l.parse().map_err(|_| bad())?))
        };
        match kind {
            "A" => pair(rest).map(|(k, l)| BasisLabel::A(k, l)),
            "B" => pair(rest).map(|(k, l)| BasisLabel::B(k, l)),
            "C" => rest.parse().map(BasisLabel::C).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// All `n² - 1` labels in coordinate order.
pub fn labels(n: usize) -> Vec<BasisLabel> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|k| ((k + 1)..=n).map(move |l| (k, l)))
        .collect();
    pairs
        .iter()
        .map(|&(k, l)| BasisLabel::A(k, l))
        .chain(pairs.iter().map(|&(k, l)| BasisLabel::B(k, l)))
        .chain((1..n).map(BasisLabel::C))
        .collect()
}

/// Traceless generator of a basis element, normalized so that
/// `(1/n) Tr(H²) = 1`.
pub fn basis_hamiltonian(label: BasisLabel, n: usize) -> Result<Hamiltonian> {
    label.check(n)?;
    let a = (n as f64 / 2.0).sqrt();
    let mut m = ComplexMatrix::zeros(n, n);
    match label {
        BasisLabel::A(k, l) => {
            m[(k - 1, l - 1)] = Complex64::new(a, 0.0);
            m[(l - 1, k - 1)] = Complex64::new(a, 0.0);
        }
        BasisLabel::B(k, l) => {
            m[(k - 1, l - 1)] = Complex64::new(0.0, a);
            m[(l - 1, k - 1)] = Complex64::new(0.0, -a);
        }
        BasisLabel::C(k) if k == n - 1 => {
            m[(0, 0)] = Complex64::new(a, 0.0);
            m[(n - 1, n - 1)] = Complex64::new(-a, 0.0);
        }
        BasisLabel::C(k) => {
            let kf = k as f64;
            let alpha = (n as f64 / (kf * kf + 3.0 * kf + 2.0)).sqrt();
            for i in 0..k {
                m[(i, i)] = Complex64::new(alpha, 0.0);
            }
            m[(k, k)] = Complex64::new(-(kf + 1.0) * alpha, 0.0);
            m[(n - 1, n - 1)] = Complex64::new(alpha, 0.0);
        }
    }
    Hamiltonian::traceless(HermitianMatrix::new(m)?)
}

/// Basis state `e^H / Tr e^H` for the labelled generator.
pub fn basis_state(label: BasisLabel, n: usize) -> Result<DensityState> {
    clr_inverse(&basis_hamiltonian(label, n)?)
}

/// All basis states in coordinate order.
pub fn full_basis(n: usize) -> Result<Vec<DensityState>> {
    if n < 2 {
        return Err(GeometryError::InvalidDimension(n));
    }
    labels(n).into_iter().map(|l| basis_state(l, n)).collect()
}

fn generators(n: usize) -> Result<Vec<Hamiltonian>> {
    labels(n)
        .into_iter()
        .map(|l| basis_hamiltonian(l, n))
        .collect()
}

/// Coordinates of a state in the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateVector {
    dim: usize,
    coords: Vec<f64>,
}

impl CoordinateVector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(GeometryError::InvalidDimension(dim));
        }
        if coords.len() != dim * dim - 1 {
            return Err(GeometryError::LengthMismatch {
                left: dim * dim - 1,
                right: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(CoordinateVector { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        labels(self.dim)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// `c_i = ⟨e_i, A⟩`, evaluated as `(1/n) Tr(H_i clr A)`.
pub fn coordinates(a: &DensityState) -> Result<CoordinateVector> {
    let n = a.dim();
    let centered = clr(a)?;
    let coords = generators(n)?
        .iter()
        .map(|h| Ok(hs_inner_real(h.matrix(), centered.matrix())? / n as f64))
        .collect::<Result<Vec<f64>>>()?;
    CoordinateVector::new(n, coords)
}

/// State with the given coordinates: `clr^{-1}(Σ c_i H_i)`.
pub fn synthesize(c: &CoordinateVector) -> Result<DensityState> {
    let n = c.dim;
    let mut sum = HermitianMatrix::zeros(n);
    for (h, &ci) in generators(n)?.iter().zip(&c.coords) {
        sum = sum.add(&h.matrix().scale(ci))?;
    }
    clr_inverse(&Hamiltonian::new(sum))
}
