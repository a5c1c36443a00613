use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{exp_i_hermitian, CMatrix};

use super::{spin_operators, Spin, SpinOperators};

/// An SU(2) element written as a rotation by `angle` about the unit vector `axis`.
///
/// Angles live in `[0, 2π]`; angle `2π` is the element `-1` of the double cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    axis: [f64; 3],
    angle: f64,
}

impl Rotation {
    /// Rotation about `axis` (normalized here) by `angle` radians.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() || !angle.is_finite() {
            return Err(Error::Validation(format!(
                "rotation axis {axis:?} / angle {angle} is not usable"
            )));
        }
        Ok(Rotation {
            axis: axis.map(|x| x / norm),
            angle,
        })
    }

    pub fn identity() -> Self {
        Rotation {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Unit quaternion `(cos θ/2, sin θ/2 · n)`.
    pub fn to_quaternion(&self) -> [f64; 4] {
        let (s, c) = (0.5 * self.angle).sin_cos();
        [c, s * self.axis[0], s * self.axis[1], s * self.axis[2]]
    }

    /// Inverse of [`Rotation::to_quaternion`]; the quaternion is normalized first.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Validation("zero quaternion".into()));
        }
        let [w, x, y, z] = q.map(|v| v / norm);
        let vnorm = (x * x + y * y + z * z).sqrt();
        let angle = 2.0 * vnorm.atan2(w);
        if vnorm < 1e-300 {
            // ±1: angle 0 or 2π about an arbitrary axis
            return Ok(Rotation {
                axis: [0.0, 0.0, 1.0],
                angle: if w > 0.0 { 0.0 } else { 2.0 * PI },
            });
        }
        Ok(Rotation {
            axis: [x / vnorm, y / vnorm, z / vnorm],
            angle,
        })
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let [w1, x1, y1, z1] = self.to_quaternion();
        let [w2, x2, y2, z2] = other.to_quaternion();
        let q = [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ];
        Rotation::from_quaternion(q).expect("product of unit quaternions is a unit quaternion")
    }
}

/// `D^{(j)}(R) = exp(-iθ n·J)`.
pub fn wigner_rotation(j: Spin, r: &Rotation) -> CMatrix {
    wigner_rotation_with(&spin_operators(j), r)
}

/// [`wigner_rotation`] reusing precomputed spin operators.
pub fn wigner_rotation_with(ops: &SpinOperators, r: &Rotation) -> CMatrix {
    exp_i_hermitian(&ops.along(r.axis), -r.angle)
}

/// Haar-random SU(2) element: a uniformly random unit quaternion from four normals.
pub fn haar_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Ok(r) = Rotation::from_quaternion(q) {
            return r;
        }
    }
}
