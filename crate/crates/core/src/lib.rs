//! Log-ratio (Aitchison) Hilbert-space geometry on the interior of the
//! finite-dimensional quantum state space.
//!
//! Positive definite unit-trace matrices form a real Hilbert space under
//!
//! * perturbation `A ⊕ B = e^{log A + log B} / Tr e^{log A + log B}`,
//! * powering `λ ⊙ A = e^{λ log A} / Tr e^{λ log A}`,
//! * the inner product `⟨A, B⟩ = (1/n) Tr(log A log B) - (1/n²) Tr log A Tr log B`,
//!
//! with the maximally mixed state `I/n` as zero vector. The crate provides
//! these operations ([`state`]), their superoperator form through relative
//! modular operators ([`modular`]), an explicit orthonormal basis with
//! coordinates ([`basis`]), closed forms for qubits ([`qubit`]) and the
//! classical simplex geometry they reduce to on diagonal states
//! ([`classical`]).
//!
//! ```
//! use qaitchison::state::{inner, norm, perturb, DensityState};
//!
//! let a = DensityState::random(3, 1).unwrap();
//! let zero = DensityState::uniform(3).unwrap();
//! assert!(perturb(&a, &zero).unwrap().max_abs_diff(&a) < 1e-12);
//! assert!((inner(&a, &a).unwrap() - norm(&a).unwrap().powi(2)).abs() < 1e-12);
//! ```

// `!(x > tol)` rejects NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod classical;
pub mod error;
pub mod io;
pub mod linalg;
pub mod modular;
pub mod qubit;
pub mod state;

pub use error::{GeometryError, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix};
pub use state::{DensityState, Hamiltonian, InverseTemperature};
