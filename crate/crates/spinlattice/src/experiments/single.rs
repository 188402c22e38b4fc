use rand::Rng;
use rayon::prelude::*;

use crate::bitstring::{single_outcome_at, BitStringSingle};
use crate::experiments::records::{standard_error, EnsembleStats, SingleRunRecord};
use crate::geometry::{LatticeKind, PhaseIndex};
use crate::ontology::{
    sample_k, sample_measurement_hv, sample_preparation_hv, AdmissibleSet, ExperimenterChoice,
    HiddenVariableSingle, ModelParams,
};
use crate::rng::{run_rng, Domain};
use crate::{Error, Result};

/// One prepare-and-measure run.
///
/// Consumes exactly four RNG words (two for the exact preparation axis, one
/// for the admissible-set choice, one for the trajectory index) regardless of
/// outcome, so per-run streams replay identically under any partitioning.
pub fn run_single_once(
    params: &ModelParams,
    prep_choice: &ExperimenterChoice,
    meas_choice: &ExperimenterChoice,
    run_index: u64,
    rng: &mut impl Rng,
    retain_bits: bool,
) -> Result<SingleRunRecord> {
    let prep = sample_preparation_hv(prep_choice, params, rng, None)?;
    let set = AdmissibleSet::build(
        &prep.setting_exact,
        &meas_choice.initial_selected,
        &meas_choice.final_selected,
        params,
        LatticeKind::Single,
    )?;
    let pair = sample_measurement_hv(&set, rng);
    let k = sample_k(params.lattice_size(), rng)?;

    let phase = PhaseIndex::zero(params.lattice_size())?;
    let outcome = single_outcome_at(&pair.cosine, phase, k)?;
    let bits = if retain_bits {
        Some(BitStringSingle::build(&pair.cosine, phase)?.to_string())
    } else {
        None
    };

    Ok(SingleRunRecord {
        run_index,
        hidden: HiddenVariableSingle {
            prep_exact: prep.prep_exact,
            apparatus_exact: pair.apparatus,
            trajectory: k,
        },
        prep_setting_exact: prep.setting_exact,
        meas_setting: pair,
        outcome,
        bits,
    })
}

struct Contribution {
    outcome: i8,
    string_expectation: f64,
    first: [f64; 3],
    second: [f64; 3],
}

/// Prepare-and-measure ensemble: `runs` independent runs, each on its own
/// RNG stream derived from (params.seed, run index).
///
/// Runs execute in parallel; contributions are folded in run order with a
/// 64-bit integer outcome sum, so the result is bit-identical whatever the
/// thread count.
pub fn run_single_ensemble(
    params: &ModelParams,
    prep_choice: &ExperimenterChoice,
    meas_choice: &ExperimenterChoice,
    runs: u64,
) -> Result<EnsembleStats> {
    validate_runs(runs)?;
    let contributions: Vec<Result<Contribution>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(params.seed(), Domain::SingleEnsemble as u64, i);
            run_single_once(params, prep_choice, meas_choice, i, &mut rng, false).map(|rec| {
                Contribution {
                    outcome: rec.outcome,
                    // The exact per-run expectation of the outcome string is
                    // its lattice cosine.
                    string_expectation: rec.meas_setting.cosine.value(),
                    first: rec.prep_setting_exact.components(),
                    second: rec.meas_setting.setting.components(),
                }
            })
        })
        .collect();

    let mut outcome_sum: i64 = 0;
    let mut string_sum = 0.0;
    let mut first_sum = [0.0; 3];
    let mut second_sum = [0.0; 3];
    for c in contributions {
        let c = c?;
        outcome_sum += i64::from(c.outcome);
        string_sum += c.string_expectation;
        for d in 0..3 {
            first_sum[d] += c.first[d];
            second_sum[d] += c.second[d];
        }
    }

    let n = runs as f64;
    let e_hat = outcome_sum as f64 / n;
    Ok(EnsembleStats {
        runs,
        e_hat,
        sigma: standard_error(e_hat, runs),
        quantum_e: prep_choice.final_selected.dot(&meas_choice.final_selected),
        lattice_e: string_sum / n,
        mean_exact_first: first_sum.map(|v| v / n),
        mean_exact_second: second_sum.map(|v| v / n),
        outcome_mean_first: e_hat,
        outcome_mean_second: None,
    })
}

/// The same runs the ensemble aggregates, materialized as records (for
/// record-stream emission and replay tests). Identical streams, identical
/// hidden variables.
pub fn collect_single_records(
    params: &ModelParams,
    prep_choice: &ExperimenterChoice,
    meas_choice: &ExperimenterChoice,
    runs: u64,
    retain_bits: bool,
) -> Result<Vec<SingleRunRecord>> {
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(params.seed(), Domain::SingleEnsemble as u64, i);
            run_single_once(params, prep_choice, meas_choice, i, &mut rng, retain_bits)
        })
        .collect()
}

pub(crate) fn validate_runs(runs: u64) -> Result<()> {
    if runs < 1000 {
        return Err(Error::Parameter {
            name: "runs",
            reason: format!("ensembles need at least 1000 runs for stable errors, got {runs}"),
        });
    }
    Ok(())
}
