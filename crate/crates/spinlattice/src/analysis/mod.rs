//! Structural diagnostics built on top of the experiments: does the
//! admissible-settings distribution depend on the other wing's setting, can
//! one hidden state yield different remote outcomes under different local
//! settings, do distinct preparations share hidden states, which
//! counterfactual rearrangements survive the lattice constraints, can
//! orthogonal dial frames be realized exactly, and how much information the
//! "free" choice of apparatus carries about the hidden configuration.
//!
//! Every operation returns a serializable report carrying the inputs,
//! the measured quantities and an explicit verdict, so downstream consumers
//! never have to re-derive thresholds.

mod census;
mod conspiracy;
mod counterfactual;
mod dependence;
mod ontic;
mod witness;

pub use census::{noncommutativity_census, OrthogonalityCensus};
pub use conspiracy::{conspiracy_experiment, ConspiracyReport};
pub use counterfactual::{
    counterfactual_bell, counterfactual_census, counterfactual_sequential, AngleClass,
    CounterfactualCensus, CounterfactualMode, CounterfactualVerdict, TriangleDiagnostics,
};
pub use dependence::{
    measurement_dependence_bell, measurement_dependence_single, DependenceReport,
    DependenceVerdict,
};
pub use ontic::{psi_ontic_check, SupportOverlapReport};
pub use witness::{nonlocality_witness, wing2_disagreement_count, NonlocalityWitness};
