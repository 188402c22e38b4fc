use crate::geometry::UnitVector;
use crate::{Error, Result};

/// Cross products below this are treated as "no usable rotation axis".
const AXIS_EPS: f64 = 1e-14;

/// A proper rotation of S², stored as a 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rodrigues rotation about `axis` by `angle` (right-handed).
    pub fn from_axis_angle(axis: &UnitVector, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_axis_sin_cos(axis.components(), s, c)
    }

    /// Build from an axis (unit) plus the sine/cosine of the angle. Using the
    /// caller's exact (s, c) pair avoids an acos/sin round trip.
    fn from_axis_sin_cos(k: [f64; 3], s: f64, c: f64) -> Self {
        let v = 1.0 - c;
        let m = [
            [
                c + k[0] * k[0] * v,
                k[0] * k[1] * v - k[2] * s,
                k[0] * k[2] * v + k[1] * s,
            ],
            [
                k[1] * k[0] * v + k[2] * s,
                c + k[1] * k[1] * v,
                k[1] * k[2] * v - k[0] * s,
            ],
            [
                k[2] * k[0] * v - k[1] * s,
                k[2] * k[1] * v + k[0] * s,
                c + k[2] * k[2] * v,
            ],
        ];
        Self { m }
    }

    /// Apply to a unit vector; the result is renormalized to absorb rounding.
    pub fn apply(&self, v: &UnitVector) -> UnitVector {
        let [x, y, z] = v.components();
        let rx = self.m[0][0] * x + self.m[0][1] * y + self.m[0][2] * z;
        let ry = self.m[1][0] * x + self.m[1][1] * y + self.m[1][2] * z;
        let rz = self.m[2][0] * x + self.m[2][1] * y + self.m[2][2] * z;
        UnitVector::new(rx, ry, rz).expect("rotation preserves norm")
    }

    /// Composition: `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Rotation { m }
    }

    pub fn transpose(&self) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[j][i];
            }
        }
        Rotation { m }
    }
}

/// The minimal rotation carrying `from` to `to`: axis from × to, angle equal
/// to their separation. `from == to` gives the identity; antipodal pairs have
/// no minimal rotation and error out.
///
/// Key transport property, used throughout the device mechanism: for every
/// unit v, |R(v) − v| = 2·sin(angle/2)·sin∠(v, axis) ≤ |to − from|, so
/// transported orientations never move farther than the pair that defines
/// the rotation.
pub fn rotation_between(from: &UnitVector, to: &UnitVector) -> Result<Rotation> {
    let axis = from.cross(to);
    let s = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let c = from.dot(to);
    if s < AXIS_EPS {
        if c > 0.0 {
            return Ok(Rotation::identity());
        }
        return Err(Error::Degenerate(
            "minimal rotation undefined for antipodal pair".into(),
        ));
    }
    let k = [axis[0] / s, axis[1] / s, axis[2] / s];
    Ok(Rotation::from_axis_sin_cos(k, s, c))
}
