use serde::{Deserialize, Serialize};

use crate::bitstring::{BitStringPair, BitStringSingle};
use crate::geometry::{PhaseIndex, UnitVector};
use crate::ontology::{ExactSettingPair, HiddenVariableBell, HiddenVariableSingle};
use crate::Result;

/// Everything one prepare-and-measure run pins down. Bit strings are
/// reconstructible from the stored lattice cosine (zero relative phase), so
/// the ±-text form is only materialized when a caller asks to retain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleRunRecord {
    pub run_index: u64,
    pub hidden: HiddenVariableSingle,
    /// Exact prepared axis Â (the mechanism's image of the dialed â).
    pub prep_setting_exact: UnitVector,
    /// Exact measurement configuration (B̂, M̂, lattice cosine, azimuth).
    pub meas_setting: ExactSettingPair,
    pub outcome: i8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
}

impl SingleRunRecord {
    /// Rebuild the outcome string this run read from (relative phase zero).
    pub fn bit_string(&self) -> Result<BitStringSingle> {
        let phase = PhaseIndex::zero(self.meas_setting.cosine.lattice_size())?;
        BitStringSingle::build(&self.meas_setting.cosine, phase)
    }

    /// Re-derive the outcome from the reconstructed string; must equal the
    /// stored one.
    pub fn recompute_outcome(&self) -> Result<i8> {
        self.bit_string()?.outcome(self.hidden.trajectory)
    }
}

/// One singlet run: wing 1 measured first, wing 2 constrained by wing 1's
/// exact setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellRunRecord {
    pub run_index: u64,
    pub hidden: HiddenVariableBell,
    /// Exact wing-1 setting B̂.
    pub wing1_setting_exact: UnitVector,
    /// Exact wing-2 configuration (Ĉ, M̂₂, lattice cosine of B̂·Ĉ, azimuth).
    pub wing2_setting: ExactSettingPair,
    pub outcomes: (i8, i8),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
}

impl BellRunRecord {
    pub fn bit_string(&self) -> Result<BitStringPair> {
        BitStringPair::build(&self.wing2_setting.cosine)
    }

    pub fn recompute_outcomes(&self) -> Result<(i8, i8)> {
        self.bit_string()?.outcomes(self.hidden.trajectory)
    }
}

/// Aggregate of an ensemble of runs.
///
/// `e_hat` is the empirical correlator (mean outcome in prepare-and-measure
/// ensembles, mean outcome product in singlet ensembles) and `sigma` its
/// binomial standard error sqrt((1 − e_hat²)/runs). `quantum_e` is the
/// textbook reference (â·b̂, resp. −b̂·ĉ); `lattice_e` averages each run's
/// exact per-string expectation, giving the model's own prediction for the
/// same draw sequence. The mean exact orientation vectors land strictly
/// inside the unit ball and must sit within Δ of their dialed counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub runs: u64,
    pub e_hat: f64,
    pub sigma: f64,
    pub quantum_e: f64,
    pub lattice_e: f64,
    /// Mean exact first-apparatus setting (â′ or b̂′).
    pub mean_exact_first: [f64; 3],
    /// Mean exact second-apparatus setting (b̂′ or ĉ′).
    pub mean_exact_second: [f64; 3],
    /// Mean first outcome (equals `e_hat` for prepare-and-measure runs).
    pub outcome_mean_first: f64,
    /// Mean second outcome (singlet ensembles only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_mean_second: Option<f64>,
}

impl EnsembleStats {
    /// |e_hat − quantum_e| budget: 2Δ of systematic headroom (each dialed
    /// orientation may sit Δ from its exact mean) plus five standard errors.
    pub fn tolerance(&self, delta: f64) -> f64 {
        2.0 * delta + 5.0 * self.sigma
    }

    pub fn within_tolerance(&self, delta: f64) -> bool {
        (self.e_hat - self.quantum_e).abs() < self.tolerance(delta)
    }
}

pub(crate) fn standard_error(e_hat: f64, runs: u64) -> f64 {
    (((1.0 - e_hat * e_hat) / runs as f64).max(0.0)).sqrt()
}
