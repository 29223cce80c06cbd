//! Vectors of the 3-D Euclidean space underlying the spacetime manifold.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of 3-D Euclidean space, in meters (geometric units).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpaceVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpaceVector {
    pub const ZERO: SpaceVector = SpaceVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Euclidean inner product.
    pub fn dot(&self, other: &SpaceVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cross product.
    pub fn cross(&self, other: &SpaceVector) -> SpaceVector {
        SpaceVector {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Squared Euclidean norm, `x . x`.
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Outward unit normal `x / |x|`.
    ///
    /// Fails at the origin (and for non-finite components, which never
    /// produce a positive finite norm).
    pub fn outward_normal(&self) -> Result<SpaceVector> {
        if !self.is_finite() {
            return Err(Error::NonFinite {
                what: "vector components",
            });
        }
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::OriginSingularity { what: "normal" });
        }
        Ok(*self / n)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for SpaceVector {
    type Output = SpaceVector;
    fn add(self, rhs: SpaceVector) -> SpaceVector {
        SpaceVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for SpaceVector {
    type Output = SpaceVector;
    fn sub(self, rhs: SpaceVector) -> SpaceVector {
        SpaceVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for SpaceVector {
    type Output = SpaceVector;
    fn mul(self, s: f64) -> SpaceVector {
        SpaceVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<SpaceVector> for f64 {
    type Output = SpaceVector;
    fn mul(self, v: SpaceVector) -> SpaceVector {
        v * self
    }
}

impl Div<f64> for SpaceVector {
    type Output = SpaceVector;
    fn div(self, s: f64) -> SpaceVector {
        SpaceVector::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for SpaceVector {
    type Output = SpaceVector;
    fn neg(self) -> SpaceVector {
        SpaceVector::new(-self.x, -self.y, -self.z)
    }
}

impl From<[f64; 3]> for SpaceVector {
    fn from(a: [f64; 3]) -> Self {
        SpaceVector::new(a[0], a[1], a[2])
    }
}

impl From<SpaceVector> for [f64; 3] {
    fn from(v: SpaceVector) -> Self {
        [v.x, v.y, v.z]
    }
}
