use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitstring::{pair_outcomes_at, BitStringPair};
use crate::experiments::records::{standard_error, BellRunRecord, EnsembleStats};
use crate::experiments::single::validate_runs;
use crate::geometry::{Cap, LatticeKind, UnitVector};
use crate::ontology::{
    mechanism, sample_k, sample_measurement_hv, AdmissibleSet, ExperimenterChoice,
    HiddenVariableBell, ModelParams,
};
use crate::rng::{run_rng, Domain};
use crate::Result;

/// One singlet run. Wing 1 is measured first: its exact rest orientation is
/// a free cap sample and fixes the exact setting B̂; wing 2's exact setting
/// is then drawn from the lattice-admissible set relative to B̂.
///
/// Word budget: two for M̂₁, one for the admissible choice, one for the
/// trajectory — fixed, so replaying a run with a different wing-2 dial leaves
/// M̂₁, B̂, and k untouched (the wing-1 outcome cannot depend on the wing-2
/// dial run by run, only the wing-2 configuration changes).
pub fn run_bell_once(
    params: &ModelParams,
    wing1_choice: &ExperimenterChoice,
    wing2_choice: &ExperimenterChoice,
    run_index: u64,
    rng: &mut impl Rng,
    retain_bits: bool,
) -> Result<BellRunRecord> {
    let cap = Cap::new(wing1_choice.initial_selected, params.delta())?;
    let m1_exact = cap.sample_uniform(rng);
    let b_exact = mechanism(
        &m1_exact,
        &wing1_choice.initial_selected,
        &wing1_choice.final_selected,
    )?;
    let set = AdmissibleSet::build(
        &b_exact,
        &wing2_choice.initial_selected,
        &wing2_choice.final_selected,
        params,
        LatticeKind::Bell,
    )?;
    let pair = sample_measurement_hv(&set, rng);
    let k = sample_k(params.lattice_size(), rng)?;

    let outcomes = pair_outcomes_at(&pair.cosine, k)?;
    let bits = if retain_bits {
        Some(BitStringPair::build(&pair.cosine)?.to_string())
    } else {
        None
    };

    Ok(BellRunRecord {
        run_index,
        hidden: HiddenVariableBell {
            apparatus1_exact: m1_exact,
            apparatus2_exact: pair.apparatus,
            trajectory: k,
        },
        wing1_setting_exact: b_exact,
        wing2_setting: pair,
        outcomes,
        bits,
    })
}

struct Contribution {
    product: i8,
    o1: i8,
    o2: i8,
    string_expectation: f64,
    first: [f64; 3],
    second: [f64; 3],
}

pub(crate) fn bell_ensemble_on_domain(
    params: &ModelParams,
    wing1_choice: &ExperimenterChoice,
    wing2_choice: &ExperimenterChoice,
    runs: u64,
    domain: u64,
) -> Result<EnsembleStats> {
    validate_runs(runs)?;
    let contributions: Vec<Result<Contribution>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(params.seed(), domain, i);
            run_bell_once(params, wing1_choice, wing2_choice, i, &mut rng, false).map(|rec| {
                Contribution {
                    product: rec.outcomes.0 * rec.outcomes.1,
                    o1: rec.outcomes.0,
                    o2: rec.outcomes.1,
                    // Exact correlation of the run's pair string is minus its
                    // lattice cosine.
                    string_expectation: -rec.wing2_setting.cosine.value(),
                    first: rec.wing1_setting_exact.components(),
                    second: rec.wing2_setting.setting.components(),
                }
            })
        })
        .collect();

    let mut product_sum: i64 = 0;
    let mut o1_sum: i64 = 0;
    let mut o2_sum: i64 = 0;
    let mut string_sum = 0.0;
    let mut first_sum = [0.0; 3];
    let mut second_sum = [0.0; 3];
    for c in contributions {
        let c = c?;
        product_sum += i64::from(c.product);
        o1_sum += i64::from(c.o1);
        o2_sum += i64::from(c.o2);
        string_sum += c.string_expectation;
        for d in 0..3 {
            first_sum[d] += c.first[d];
            second_sum[d] += c.second[d];
        }
    }

    let n = runs as f64;
    let e_hat = product_sum as f64 / n;
    Ok(EnsembleStats {
        runs,
        e_hat,
        sigma: standard_error(e_hat, runs),
        quantum_e: -wing1_choice.final_selected.dot(&wing2_choice.final_selected),
        lattice_e: string_sum / n,
        mean_exact_first: first_sum.map(|v| v / n),
        mean_exact_second: second_sum.map(|v| v / n),
        outcome_mean_first: o1_sum as f64 / n,
        outcome_mean_second: Some(o2_sum as f64 / n),
    })
}

/// Singlet ensemble over per-run RNG streams; deterministic under any thread
/// count, like the prepare-and-measure ensemble.
pub fn run_bell_ensemble(
    params: &ModelParams,
    wing1_choice: &ExperimenterChoice,
    wing2_choice: &ExperimenterChoice,
    runs: u64,
) -> Result<EnsembleStats> {
    bell_ensemble_on_domain(
        params,
        wing1_choice,
        wing2_choice,
        runs,
        Domain::BellEnsemble as u64,
    )
}

/// Record materialization for the same streams the ensemble uses.
pub fn collect_bell_records(
    params: &ModelParams,
    wing1_choice: &ExperimenterChoice,
    wing2_choice: &ExperimenterChoice,
    runs: u64,
    retain_bits: bool,
) -> Result<Vec<BellRunRecord>> {
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(params.seed(), Domain::BellEnsemble as u64, i);
            run_bell_once(params, wing1_choice, wing2_choice, i, &mut rng, retain_bits)
        })
        .collect()
}

/// The four dials of a two-setting-per-wing correlation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub b: UnitVector,
    pub b_prime: UnitVector,
    pub c: UnitVector,
    pub c_prime: UnitVector,
}

impl ChshSettings {
    /// The coplanar optimum: wing-1 axes at polar angles 0 and π/2, wing-2
    /// axes at π/4 and 3π/4, all in the xz-plane.
    pub fn textbook() -> Self {
        Self {
            b: UnitVector::from_xz_angle(0.0),
            b_prime: UnitVector::from_xz_angle(FRAC_PI_2),
            c: UnitVector::from_xz_angle(FRAC_PI_4),
            c_prime: UnitVector::from_xz_angle(3.0 * FRAC_PI_4),
        }
    }

    /// Quantum singlet prediction for these dials:
    /// |E(b,c) − E(b,c′) + E(b′,c) + E(b′,c′)| with E(x,y) = −x·y.
    pub fn quantum_s(&self) -> f64 {
        let e = |x: &UnitVector, y: &UnitVector| -x.dot(y);
        (e(&self.b, &self.c) - e(&self.b, &self.c_prime)
            + e(&self.b_prime, &self.c)
            + e(&self.b_prime, &self.c_prime))
        .abs()
    }
}

/// Four singlet correlators and their CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub settings: ChshSettings,
    pub runs_per_pair: u64,
    /// Correlators for (b,c), (b,c′), (b′,c), (b′,c′) in that order.
    pub correlators: [EnsembleStats; 4],
    pub s_value: f64,
    /// Sum of the four correlator standard errors.
    pub sigma_sum: f64,
    pub quantum_s: f64,
}

impl ChshReport {
    /// Each correlator carries ≤ 2Δ of systematic slack; five summed standard
    /// errors of statistical slack on top.
    pub fn threshold(&self, delta: f64) -> f64 {
        self.quantum_s - 8.0 * delta - 5.0 * self.sigma_sum
    }

    pub fn violates_classical_bound(&self, delta: f64) -> bool {
        self.s_value >= self.threshold(delta).max(2.0)
    }
}

/// Runs the four correlation ensembles (each on its own stream family) and
/// combines them. Apparatus rest orientations sit at their dials.
pub fn chsh(params: &ModelParams, settings: &ChshSettings, runs_per_pair: u64) -> Result<ChshReport> {
    let pairs = [
        (settings.b, settings.c),
        (settings.b, settings.c_prime),
        (settings.b_prime, settings.c),
        (settings.b_prime, settings.c_prime),
    ];
    let mut correlators = Vec::with_capacity(4);
    for (idx, (w1, w2)) in pairs.iter().enumerate() {
        let wing1 = ExperimenterChoice::new(*w1, *w1);
        let wing2 = ExperimenterChoice::new(*w2, *w2);
        correlators.push(bell_ensemble_on_domain(
            params,
            &wing1,
            &wing2,
            runs_per_pair,
            Domain::Chsh as u64 + idx as u64,
        )?);
    }
    let correlators: [EnsembleStats; 4] =
        [correlators[0], correlators[1], correlators[2], correlators[3]];
    let s_value = (correlators[0].e_hat - correlators[1].e_hat
        + correlators[2].e_hat
        + correlators[3].e_hat)
        .abs();
    let sigma_sum = correlators.iter().map(|c| c.sigma).sum();
    Ok(ChshReport {
        settings: *settings,
        runs_per_pair,
        correlators,
        s_value,
        sigma_sum,
        quantum_s: settings.quantum_s(),
    })
}
