//! Hidden state of the model and the maps that produce it.
//!
//! A run's hidden variables are exact orientations tied to the selected ones
//! by the resolution bound Δ and by lattice membership relative to the other
//! exact axis in play. [`mechanism`] carries selected settings to exact
//! settings; [`AdmissibleSet`] enumerates the exact settings an apparatus
//! can realize; the `sample_*` functions draw hidden state with a fixed RNG
//! word budget so that replay stays exact.

mod admissible;
mod hidden;
mod mechanism;
mod params;
mod sample;

pub use admissible::AdmissibleSet;
pub use hidden::{ExactSettingPair, HiddenVariableBell, HiddenVariableSingle};
pub use mechanism::{mechanism, mechanism_inverse};
pub use params::{ExperimenterChoice, ModelParams};
pub use sample::{sample_k, sample_measurement_hv, sample_preparation_hv, PreparationDraw};
