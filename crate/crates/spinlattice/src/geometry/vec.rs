use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Norm below which a vector cannot be meaningfully normalized.
const DEGENERATE_NORM: f64 = 1e-12;

/// A unit vector on S². Construction normalizes, so the invariant |v| = 1
/// holds to within one rounding step everywhere downstream.
///
/// Serializes as a plain `[x, y, z]` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    /// Normalize (x, y, z); errors on (near-)zero input.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < DEGENERATE_NORM {
            return Err(Error::Degenerate(format!(
                "cannot normalize vector ({x}, {y}, {z})"
            )));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// +z axis.
    pub fn z_axis() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    /// Direction at angle `alpha` (radians) from +z inside the xz-plane:
    /// (sin α, 0, cos α). The coplanar convention used by angle-based
    /// configuration.
    pub fn from_xz_angle(alpha: f64) -> Self {
        Self { x: alpha.sin(), y: 0.0, z: alpha.cos() }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cross product (not generally unit length).
    pub fn cross(&self, other: &Self) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Euclidean distance |self − other| ∈ [0, 2]: the chord metric used for
    /// every resolution bound in the model.
    pub fn chord_to(&self, other: &Self) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Angle to `other` in [0, π], computed from chord lengths so it stays
    /// accurate for nearly parallel and nearly antipodal pairs alike.
    pub fn angle_to(&self, other: &Self) -> f64 {
        let sum = [
            self.x + other.x,
            self.y + other.y,
            self.z + other.z,
        ];
        let sum_norm = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
        2.0 * (self.chord_to(other) / 2.0).atan2(sum_norm / 2.0)
    }

    /// Linear combination, renormalized.
    pub(crate) fn combine(coeffs: &[(f64, &UnitVector)]) -> Result<Self> {
        let mut acc = [0.0; 3];
        for (c, v) in coeffs {
            acc[0] += c * v.x;
            acc[1] += c * v.y;
            acc[2] += c * v.z;
        }
        Self::new(acc[0], acc[1], acc[2])
    }
}

impl std::ops::Neg for UnitVector {
    type Output = UnitVector;

    fn neg(self) -> UnitVector {
        UnitVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl TryFrom<[f64; 3]> for UnitVector {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<UnitVector> for [f64; 3] {
    fn from(v: UnitVector) -> [f64; 3] {
        v.components()
    }
}
