//! Closed-form geometry of two-level states in Bloch-ball coordinates.
//!
//! `(x, y, z) ↦ ½ [[1 + z, x + iy], [x - iy, 1 - z]]`. In these coordinates
//! the log-ratio norm of a state is `artanh` of its Euclidean radius, angles
//! are preserved, powering is a radial rescaling `r ↦ tanh(λ artanh r)` and
//! the additive inverse is the point reflection through the origin.

use num_complex::Complex64;

use crate::error::{GeometryError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::state::DensityState;

/// States closer than this to the Bloch sphere are rejected.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// A point of the open Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let radius = (x * x + y * y + z * z).sqrt();
        if !radius.is_finite() || radius >= 1.0 - BOUNDARY_GUARD {
            return Err(GeometryError::OutsideBall { radius });
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn origin() -> Self {
        BlochVector {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn radius(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cosine of the Euclidean angle; `None` if either vector is the origin.
    pub fn cos_angle(&self, other: &BlochVector) -> Option<f64> {
        let denom = self.radius() * other.radius();
        if denom == 0.0 {
            return None;
        }
        Some((self.dot(other) / denom).clamp(-1.0, 1.0))
    }
}

pub fn bloch_to_state(v: &BlochVector) -> Result<DensityState> {
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new((1.0 + v.z) / 2.0, 0.0),
            Complex64::new(v.x / 2.0, v.y / 2.0),
            Complex64::new(v.x / 2.0, -v.y / 2.0),
            Complex64::new((1.0 - v.z) / 2.0, 0.0),
        ],
    );
    DensityState::new(HermitianMatrix::new(m)?)
}

pub fn state_to_bloch(d: &DensityState) -> Result<BlochVector> {
    if d.dim() != 2 {
        return Err(GeometryError::WrongDimension(d.dim()));
    }
    let m = d.matrix().as_matrix();
    BlochVector::new(
        2.0 * m[(0, 1)].re,
        2.0 * m[(0, 1)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    )
}

/// `artanh(R) artanh(r) cos θ`; zero when either vector is the origin.
pub fn inner_closed(v1: &BlochVector, v2: &BlochVector) -> f64 {
    match v1.cos_angle(v2) {
        Some(cos) => v1.radius().atanh() * v2.radius().atanh() * cos,
        None => 0.0,
    }
}

pub fn norm_closed(v: &BlochVector) -> f64 {
    v.radius().atanh()
}

/// `sqrt(artanh²R + artanh²r - 2 cos θ artanh R artanh r)`.
pub fn distance_closed(v1: &BlochVector, v2: &BlochVector) -> f64 {
    let big = norm_closed(v1);
    let small = norm_closed(v2);
    let cos = v1.cos_angle(v2).unwrap_or(0.0);
    (big * big + small * small - 2.0 * cos * big * small)
        .max(0.0)
        .sqrt()
}

/// Point reflection; the state it maps to is `I - D`.
pub fn negate_closed(v: &BlochVector) -> BlochVector {
    BlochVector {
        x: -v.x,
        y: -v.y,
        z: -v.z,
    }
}

/// Radial dilatation to radius `tanh(λ artanh r)`. Negative `λ` reverses the
/// direction, consistent with [`negate_closed`].
pub fn dilate_closed(lambda: f64, v: &BlochVector) -> Result<BlochVector> {
    let r = v.radius();
    if r == 0.0 {
        return Ok(BlochVector::origin());
    }
    let factor = (lambda * r.atanh()).tanh() / r;
    BlochVector::new(v.x * factor, v.y * factor, v.z * factor)
}
