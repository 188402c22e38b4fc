use serde::{Deserialize, Serialize};

use crate::geometry::{allowed_cosines, LatticeKind, RationalCosine, UnitVector};
use crate::{Error, Result};

/// Model parameters shared by every experiment.
///
/// * `lattice_size` — N, even and ≥ 4; fixes both cosine lattices.
/// * `delta` — the resolution bound Δ ∈ (0, 0.2]: every exact orientation
///   sits within chord Δ of its selected counterpart.
/// * `azimuth_steps` — how finely each lattice ring is discretized when
///   admissible exact settings are enumerated (default: N).
/// * `seed` — root of every derived RNG stream.
///
/// `N·Δ ≥ 8` (see [`ModelParams::feasible`]) guarantees a Δ-cap near the
/// equator of a partner axis spans at least two ring spacings; it is a
/// sufficient condition for typical geometries, not a hard invariant —
/// small lattices remain constructible for the exact-arithmetic studies
/// that never touch caps, and genuinely empty admissible sets surface as
/// infeasibility errors where they occur.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    lattice_size: u32,
    delta: f64,
    azimuth_steps: u32,
    seed: u64,
}

/// Unvalidated mirror used for serialization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    lattice_size: u32,
    delta: f64,
    azimuth_steps: u32,
    seed: u64,
}

impl ModelParams {
    pub fn new(lattice_size: u32, delta: f64, azimuth_steps: u32, seed: u64) -> Result<Self> {
        if lattice_size < 4 || !lattice_size.is_multiple_of(2) {
            return Err(Error::Parameter {
                name: "lattice_size",
                reason: format!("must be even and >= 4, got {lattice_size}"),
            });
        }
        if !(delta > 0.0 && delta <= 0.2) {
            return Err(Error::Parameter {
                name: "delta",
                reason: format!("must lie in (0, 0.2], got {delta}"),
            });
        }
        if azimuth_steps < 4 {
            return Err(Error::Parameter {
                name: "azimuth_steps",
                reason: format!("must be >= 4, got {azimuth_steps}"),
            });
        }
        Ok(Self { lattice_size, delta, azimuth_steps, seed })
    }

    /// `azimuth_steps` defaults to the lattice size.
    pub fn with_default_azimuth(lattice_size: u32, delta: f64, seed: u64) -> Result<Self> {
        Self::new(lattice_size, delta, lattice_size, seed)
    }

    pub fn lattice_size(&self) -> u32 {
        self.lattice_size
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn azimuth_steps(&self) -> u32 {
        self.azimuth_steps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// N·Δ ≥ 8: a Δ-cap transverse to a partner axis near its equator spans
    /// ≈ 2Δ in cosine, at least twice the ring spacing 4/N, so admissible
    /// sets there cannot be starved by discreteness.
    pub fn feasible(&self) -> bool {
        f64::from(self.lattice_size) * self.delta >= 8.0
    }

    pub fn allowed_cosines(&self, kind: LatticeKind) -> Result<Vec<RationalCosine>> {
        allowed_cosines(self.lattice_size, kind)
    }
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.lattice_size, raw.delta, raw.azimuth_steps, raw.seed)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> RawParams {
        RawParams {
            lattice_size: p.lattice_size,
            delta: p.delta,
            azimuth_steps: p.azimuth_steps,
            seed: p.seed,
        }
    }
}

/// What one experimenter dials on one apparatus: the orientation it rests at
/// before the run and the setting chosen for the run. Exact counterparts of
/// both live in the hidden state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimenterChoice {
    pub initial_selected: UnitVector,
    pub final_selected: UnitVector,
}

impl ExperimenterChoice {
    pub fn new(initial_selected: UnitVector, final_selected: UnitVector) -> Self {
        Self { initial_selected, final_selected }
    }
}
