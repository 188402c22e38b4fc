//! Runnable experiments: prepare-and-measure ensembles, singlet-pair
//! ensembles and their CHSH combination, and sequential three-apparatus runs
//! with drifting rest orientations.
//!
//! Every ensemble derives one RNG stream per run from (seed, domain, run
//! index) and folds contributions in run order, so results are bit-identical
//! across thread counts and run partitionings.

mod bell;
mod drift;
mod records;
mod sequential;
mod single;

pub use bell::{
    chsh, collect_bell_records, run_bell_ensemble, run_bell_once, ChshReport, ChshSettings,
};
pub use drift::DriftModel;
pub use records::{BellRunRecord, EnsembleStats, SingleRunRecord};
pub use sequential::{
    constraint_report, run_sequential, PhaseSnapReport, SequentialConstraintReport,
    SequentialRunRecord, SnapReport,
};
pub(crate) use sequential::dihedral_phase;
pub use single::{collect_single_records, run_single_ensemble, run_single_once};
