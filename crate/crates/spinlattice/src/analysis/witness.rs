use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::{pair_outcomes_at, TrajectoryIndex};
use crate::geometry::{
    membership_tolerance, nearest_allowed, Cap, LatticeKind, RationalCosine, UnitVector,
};
use crate::ontology::{AdmissibleSet, ModelParams};
use crate::{Error, Result};

/// A concrete demonstration that the wing-2 outcome is a function of the
/// wing-1 exact setting: one shared wing-2 configuration (Ĉ, M̂₂) and
/// trajectory index, two admissible wing-1 exact settings, two different
/// wing-2 outcomes.
///
/// Both wing-1 settings land exactly on the singlet lattice relative to Ĉ,
/// so the outcome difference survives the restriction to physically possible
/// exact settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlocalityWitness {
    /// Shared wing-2 exact setting Ĉ.
    pub wing2_exact: UnitVector,
    /// Shared wing-2 exact apparatus rest M̂₂.
    pub wing2_apparatus: UnitVector,
    /// First wing-1 exact setting and its lattice cosine against Ĉ.
    pub first_exact: UnitVector,
    pub first_cosine: RationalCosine,
    /// Second wing-1 exact setting and its lattice cosine against Ĉ.
    pub second_exact: UnitVector,
    pub second_cosine: RationalCosine,
    /// Shared trajectory index.
    pub trajectory: TrajectoryIndex,
    /// (O₁, O₂) under the first and second wing-1 setting.
    pub first_outcomes: (i8, i8),
    pub second_outcomes: (i8, i8),
    /// Search trials consumed before this witness appeared.
    pub trials_used: u64,
}

impl NonlocalityWitness {
    /// Re-derives everything the witness claims from its stored inputs:
    /// outcome pairs from (cosine, k), the wing-2 outcome difference, the
    /// wing-1 outcome equality, and lattice membership of both dot products.
    pub fn verify(&self) -> Result<bool> {
        let first = pair_outcomes_at(&self.first_cosine, self.trajectory)?;
        let second = pair_outcomes_at(&self.second_cosine, self.trajectory)?;
        let tol = membership_tolerance(self.first_cosine.lattice_size());
        Ok(first == self.first_outcomes
            && second == self.second_outcomes
            && first.1 != second.1
            && first.0 == second.0
            && (self.first_exact.dot(&self.wing2_exact) - self.first_cosine.value()).abs() < tol
            && (self.second_exact.dot(&self.wing2_exact) - self.second_cosine.value()).abs() < tol)
    }
}

/// Searches for a nonlocality witness.
///
/// Each trial samples a wing-1 exact setting near one dial, picks an
/// admissible wing-2 configuration for it, then looks for a second admissible
/// wing-1 setting (near a second dial) whose lattice cosine against the same
/// Ĉ has a different ring index. A trajectory index on which the two outcome
/// strings disagree in row 2 always exists at the ring boundary.
///
/// The two wing-1 dials are placed where the lattice is densest in reach:
/// at the allowed cosines nearest 1/2 and 0 relative to the wing-2 dial.
pub fn nonlocality_witness(
    params: &ModelParams,
    rng: &mut impl Rng,
    max_trials: u64,
) -> Result<NonlocalityWitness> {
    let n = params.lattice_size();
    let wing2_dial = UnitVector::z_axis();
    let first_dial = UnitVector::from_xz_angle(
        nearest_allowed(0.5, n, LatticeKind::Bell)?.value().acos(),
    );
    let second_dial = UnitVector::from_xz_angle(
        nearest_allowed(0.0, n, LatticeKind::Bell)?.value().acos(),
    );
    let first_cap = Cap::new(first_dial, params.delta())?;

    for trial in 0..max_trials {
        let first_exact = first_cap.sample_uniform(rng);
        let Ok(wing2_set) = AdmissibleSet::build(
            &first_exact,
            &wing2_dial,
            &wing2_dial,
            params,
            LatticeKind::Bell,
        ) else {
            continue;
        };
        let wing2 = wing2_set.sample(rng);

        let Ok(reverse_set) = AdmissibleSet::build(
            &wing2.setting,
            &second_dial,
            &second_dial,
            params,
            LatticeKind::Bell,
        ) else {
            continue;
        };
        let Some(second) = reverse_set
            .iter()
            .find(|pair| pair.cosine.index() != wing2.cosine.index())
        else {
            continue;
        };

        // Row 2 of the two strings first disagrees just past the smaller
        // ring index: the shorter leading +-block has already flipped sign.
        let k = TrajectoryIndex::new(wing2.cosine.index().min(second.cosine.index()) + 1, n)?;
        let first_outcomes = pair_outcomes_at(&wing2.cosine, k)?;
        let second_outcomes = pair_outcomes_at(&second.cosine, k)?;
        debug_assert_ne!(first_outcomes.1, second_outcomes.1);

        return Ok(NonlocalityWitness {
            wing2_exact: wing2.setting,
            wing2_apparatus: wing2.apparatus,
            first_exact,
            first_cosine: wing2.cosine,
            second_exact: second.setting,
            second_cosine: second.cosine,
            trajectory: k,
            first_outcomes,
            second_outcomes,
            trials_used: trial + 1,
        });
    }
    Err(Error::SearchExhausted {
        what: "nonlocality witness",
        trials: max_trials,
    })
}

/// Number of trajectory indices on which the wing-2 outcome differs between
/// two singlet strings sharing N but built from different lattice cosines.
pub fn wing2_disagreement_count(
    first: &RationalCosine,
    second: &RationalCosine,
) -> Result<u64> {
    if first.lattice_size() != second.lattice_size() {
        return Err(Error::Parameter {
            name: "lattice_size",
            reason: format!(
                "cannot compare strings over different lattices ({} vs {})",
                first.lattice_size(),
                second.lattice_size()
            ),
        });
    }
    let n = first.lattice_size();
    let mut count = 0;
    for k in 1..=n {
        let k = TrajectoryIndex::new(k, n)?;
        if pair_outcomes_at(first, k)?.1 != pair_outcomes_at(second, k)?.1 {
            count += 1;
        }
    }
    Ok(count)
}
