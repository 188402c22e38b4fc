use serde::{Deserialize, Serialize};

use crate::bitstring::TrajectoryIndex;
use crate::geometry::{RationalCosine, UnitVector};

/// Hidden state of a prepare-and-measure run: the exact preparation axis P̂,
/// the exact apparatus rest orientation M̂ (equivalently, via the mechanism,
/// the exact setting it realizes), and the trajectory index selecting one
/// column of the outcome string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HiddenVariableSingle {
    pub prep_exact: UnitVector,
    pub apparatus_exact: UnitVector,
    pub trajectory: TrajectoryIndex,
}

/// Hidden state of a two-wing singlet run. The prepared state is the fixed
/// singlet, so only the two exact apparatus rest orientations and the shared
/// trajectory index vary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HiddenVariableBell {
    pub apparatus1_exact: UnitVector,
    pub apparatus2_exact: UnitVector,
    pub trajectory: TrajectoryIndex,
}

/// One admissible exact configuration of an apparatus relative to a partner
/// axis: the exact setting B̂ it realizes, the exact rest orientation M̂
/// that realizes it, the lattice cosine B̂ forms with the partner, and the
/// azimuth grid index locating B̂ on its ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactSettingPair {
    pub setting: UnitVector,
    pub apparatus: UnitVector,
    pub cosine: RationalCosine,
    pub azimuth_index: u32,
}
