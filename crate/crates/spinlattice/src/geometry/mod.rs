//! Spherical geometry: unit vectors, the rational-cosine lattices, minimal
//! rotations, Δ-caps and spherical triangles.
//!
//! Everything downstream reduces to a handful of exact facts kept here:
//! which cosines the lattices allow (integer arithmetic only), which
//! cos(pπ/q) are rational (a classical classification: only 0, ±1/2, ±1),
//! and how orientations transport along minimal rotations.

mod cap;
mod lattice;
mod niven;
mod rotation;
mod triangle;
mod vec;

pub use cap::{tangent_frame, Cap};
pub use lattice::{
    allowed_cosines, membership_tolerance, nearest_allowed, LatticeKind, PhaseIndex,
    RationalCosine,
};
pub use niven::{cos_is_rational, cos_rational_class, nearest_rational_angle};
pub use rotation::{rotation_between, Rotation};
pub use triangle::SphericalTriangle;
pub use vec::UnitVector;
