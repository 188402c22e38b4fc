//! Simulation of a superdeterministic hidden-variable model for spin-1/2
//! systems in which the exact orientations of preparation and measurement
//! devices are constrained to a rational-cosine lattice on the sphere.
//!
//! The model separates what an experimenter *selects* from what the apparatus
//! *exactly* realizes. Selected orientations are arbitrary unit vectors; exact
//! orientations differ from them by less than a resolution bound Δ (chord
//! distance) and are further constrained so that dot products between paired
//! exact settings land on a finite lattice of rational cosines:
//!
//! * single-particle pairs:  Â·B̂ = 1 − (2n−1)/(N/2),  n ∈ {1, …, N/2}
//! * singlet pairs:          B̂·Ĉ = 1 − 4n/N,          n ∈ {1, …, N/2}
//!
//! with N an even lattice size. Measurement outcomes are entries of finite
//! ±1 strings whose composition is fixed exactly by the lattice cosine, so
//! every ensemble average is a rational number reproduced by Monte-Carlo
//! sampling within explicit tolerances.
//!
//! Crate layout:
//!
//! * [`geometry`] — unit vectors, the rational-cosine lattices, rotations,
//!   spherical caps and triangles, rationality classification of cos(pπ/q);
//! * [`bitstring`] — the exact ±1 outcome strings and their counting
//!   identities;
//! * [`ontology`] — model parameters, hidden variables, the device mechanism
//!   and the admissible exact-setting sets;
//! * [`experiments`] — seeded single/pair/sequential runs, ensembles and the
//!   four-correlator CHSH battery;
//! * [`analysis`] — measurement-dependence distances, outcome-dependence
//!   witnesses, support overlap, counterfactual audits, orthogonality census
//!   and the many-apparatus correlation study.
//!
//! All randomness flows through explicitly seeded ChaCha streams; every run
//! index owns a private stream, so results are bit-identical regardless of
//! how work is scheduled across threads.

pub mod analysis;
pub mod bitstring;
mod error;
pub mod experiments;
pub mod geometry;
pub mod ontology;
pub(crate) mod rng;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
