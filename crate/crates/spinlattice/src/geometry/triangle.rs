use serde::{Deserialize, Serialize};

use crate::geometry::UnitVector;
use crate::{Error, Result};

/// Vertices closer (in chord) than this, or closer than this to antipodal,
/// make arcs/vertex angles ill-conditioned and are rejected.
const DEGENERATE_CHORD: f64 = 1e-9;

/// A spherical triangle given by three vertices on S².
///
/// Side `i` is the arc opposite vertex `i` (the classical convention), so
/// `side_cosines()[0]` is v₁·v₂ and `vertex_angles()[0]` is the corner at
/// v₀. Angles come from projected tangent directions rather than the law of
/// cosines, which keeps them stable near degenerate shapes; the law of
/// cosines is then available as a cross-check identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalTriangle {
    vertices: [UnitVector; 3],
}

impl SphericalTriangle {
    pub fn new(v0: UnitVector, v1: UnitVector, v2: UnitVector) -> Result<Self> {
        let vs = [v0, v1, v2];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let chord = vs[i].chord_to(&vs[j]);
                if chord < DEGENERATE_CHORD {
                    return Err(Error::Degenerate(format!(
                        "triangle vertices {i} and {j} coincide"
                    )));
                }
                if 2.0 - chord < DEGENERATE_CHORD {
                    return Err(Error::Degenerate(format!(
                        "triangle vertices {i} and {j} are antipodal"
                    )));
                }
            }
        }
        Ok(Self { vertices: vs })
    }

    pub fn vertices(&self) -> &[UnitVector; 3] {
        &self.vertices
    }

    /// Cosines of the sides [v₁·v₂, v₀·v₂, v₀·v₁] (side i opposite vertex i).
    pub fn side_cosines(&self) -> [f64; 3] {
        let [a, b, c] = &self.vertices;
        [b.dot(c), a.dot(c), a.dot(b)]
    }

    /// Arc lengths of the sides, same indexing as `side_cosines`.
    pub fn side_arcs(&self) -> [f64; 3] {
        let [a, b, c] = &self.vertices;
        [b.angle_to(c), a.angle_to(c), a.angle_to(b)]
    }

    /// Interior angle at each vertex, in [0, π].
    pub fn vertex_angles(&self) -> [f64; 3] {
        [self.angle_at(0), self.angle_at(1), self.angle_at(2)]
    }

    /// Interior angle at vertex `i`: the angle between the tangent directions
    /// of the two arcs leaving it.
    pub fn angle_at(&self, i: usize) -> f64 {
        let (t1, t2) = self.tangents_at(i);
        let cross = t1.cross(&t2);
        let cross_norm =
            (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        cross_norm.atan2(t1.dot(&t2))
    }

    /// Signed angle at vertex `i` in (−π, π]: magnitude as `angle_at`, sign
    /// from the orientation of the tangent pair about the vertex normal.
    /// This is the dihedral phase reported for sequential-run diagnostics.
    pub fn signed_angle_at(&self, i: usize) -> f64 {
        let (t1, t2) = self.tangents_at(i);
        let v = &self.vertices[i];
        let cross = t1.cross(&t2);
        let sin_signed = cross[0] * v.x() + cross[1] * v.y() + cross[2] * v.z();
        sin_signed.atan2(t1.dot(&t2))
    }

    fn tangents_at(&self, i: usize) -> (UnitVector, UnitVector) {
        let v = &self.vertices[i];
        let u = &self.vertices[(i + 1) % 3];
        let w = &self.vertices[(i + 2) % 3];
        let project = |target: &UnitVector| {
            let d = target.dot(v);
            UnitVector::new(
                target.x() - d * v.x(),
                target.y() - d * v.y(),
                target.z() - d * v.z(),
            )
            .expect("non-degenerate triangle has well-defined tangents")
        };
        (project(u), project(w))
    }
}
