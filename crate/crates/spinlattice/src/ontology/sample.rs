use rand::Rng;

use crate::bitstring::TrajectoryIndex;
use crate::geometry::{Cap, UnitVector};
use crate::ontology::admissible::AdmissibleSet;
use crate::ontology::hidden::ExactSettingPair;
use crate::ontology::mechanism::mechanism;
use crate::ontology::params::{ExperimenterChoice, ModelParams};
use crate::rng::uniform_index;
use crate::Result;

/// Exact state fixed at the source: the exact preparation axis and the exact
/// setting the preparing apparatus realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationDraw {
    pub prep_exact: UnitVector,
    pub setting_exact: UnitVector,
}

/// Draw the exact preparation. The exact rest orientation P̂ is sampled in
/// the Δ-cap around the selected one; the exact prepared setting follows
/// deterministically through the mechanism.
///
/// `bias_strength` optionally tilts the cap density toward the dialed
/// setting (used only by diagnostics that probe robustness to a skewed
/// prior); `None` is the model's uniform default and consumes exactly two
/// RNG words.
pub fn sample_preparation_hv(
    choice: &ExperimenterChoice,
    params: &ModelParams,
    rng: &mut impl Rng,
    bias_strength: Option<f64>,
) -> Result<PreparationDraw> {
    let cap = Cap::new(choice.initial_selected, params.delta())?;
    let prep_exact = match bias_strength {
        None => cap.sample_uniform(rng),
        Some(strength) => cap.sample_biased(rng, &choice.final_selected, strength),
    };
    let setting_exact = mechanism(&prep_exact, &choice.initial_selected, &choice.final_selected)?;
    Ok(PreparationDraw { prep_exact, setting_exact })
}

/// Draw one admissible exact configuration for the measuring apparatus,
/// uniformly over the admissible set. Exactly one RNG word.
pub fn sample_measurement_hv(set: &AdmissibleSet, rng: &mut impl Rng) -> ExactSettingPair {
    set.sample(rng)
}

/// Draw the trajectory index k, uniform on 1..=N. Exactly one RNG word.
pub fn sample_k(lattice_size: u32, rng: &mut impl Rng) -> Result<TrajectoryIndex> {
    let k = uniform_index(rng, lattice_size as usize) as u32 + 1;
    TrajectoryIndex::new(k, lattice_size)
}
