use thiserror::Error;

/// Errors shared across the crate.
///
/// Infeasibility is a first-class outcome: a configuration whose admissible
/// set is empty signals misconfiguration (lattice too coarse for the requested
/// geometry), and the error carries enough data to say why.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A model parameter failed validation.
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// An input vector or configuration is degenerate (zero norm, antipodal
    /// pair where a rotation is needed, coincident triangle vertices, …).
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// No admissible exact setting exists for the requested geometry.
    #[error(
        "no admissible exact setting: lattice size {lattice_size}, delta {delta}, \
         nearest ring at chord {nearest_ring_chord:.6} vs reachable {reachable_chord:.6} \
         around the selected setting"
    )]
    Infeasible {
        lattice_size: u32,
        delta: f64,
        /// Chord distance from the cap centre to the nearest lattice ring.
        nearest_ring_chord: f64,
        /// Maximum chord distance the support bounds allow.
        reachable_chord: f64,
    },

    /// A value lies outside the domain of an exact operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bounded search finished without finding its target.
    #[error("search exhausted after {trials} trials: {what}")]
    SearchExhausted { what: &'static str, trials: u64 },
}
