use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{LatticeKind, UnitVector};
use crate::ontology::{AdmissibleSet, ModelParams};
use crate::rng::uniform_index;
use crate::{Error, Result};

/// Outcome of a measurement-dependence comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependenceVerdict {
    /// The confidence interval for the total-variation distance excludes 0.
    Dependent,
    /// The interval reaches 0: no dependence resolvable at this sample size.
    IndependentWithinTolerance,
}

/// Comparison of the conditional exact-apparatus distributions under two
/// experimentally-selected settings.
///
/// `distance` is the empirical total-variation distance between the two
/// conditionals over the discrete admissible alphabet (lattice ring index ×
/// azimuth index). The 95% interval comes from a basic (bias-correcting)
/// bootstrap, so identical-setting controls straddle 0 instead of inheriting
/// the positive small-sample bias of the plug-in estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub first_setting: UnitVector,
    pub second_setting: UnitVector,
    pub samples_per_setting: u64,
    /// Admissible-set cardinalities under the first and second setting.
    pub support_sizes: (u64, u64),
    /// Empirical total-variation distance, in [0, 1].
    pub distance: f64,
    /// Basic-bootstrap 95% interval, clamped to [0, 1].
    pub ci_low: f64,
    pub ci_high: f64,
    pub bootstrap_resamples: u32,
    pub verdict: DependenceVerdict,
}

const BOOTSTRAP_RESAMPLES: u32 = 200;

/// Does the distribution of the exact measurement-apparatus configuration,
/// conditioned on one exact prepared axis, depend on which setting the
/// experimenter dialed? Draws `samples` admissible configurations under each
/// dial and compares them.
pub fn measurement_dependence_single(
    params: &ModelParams,
    prep_exact: &UnitVector,
    first_dial: &UnitVector,
    second_dial: &UnitVector,
    apparatus_rest: &UnitVector,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<DependenceReport> {
    let first = AdmissibleSet::build(
        prep_exact,
        apparatus_rest,
        first_dial,
        params,
        LatticeKind::Single,
    )?;
    let second = AdmissibleSet::build(
        prep_exact,
        apparatus_rest,
        second_dial,
        params,
        LatticeKind::Single,
    )?;
    compare_sets(&first, &second, samples, rng)
}

/// Bell-scenario variant: the wing-2 exact configuration is conditioned on
/// wing 1's exact setting, so two different wing-1 settings induce two
/// conditionals over the same wing-2 dial.
pub fn measurement_dependence_bell(
    params: &ModelParams,
    wing1_first: &UnitVector,
    wing1_second: &UnitVector,
    wing2_dial: &UnitVector,
    wing2_rest: &UnitVector,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<DependenceReport> {
    let first = AdmissibleSet::build(
        wing1_first,
        wing2_rest,
        wing2_dial,
        params,
        LatticeKind::Bell,
    )?;
    let second = AdmissibleSet::build(
        wing1_second,
        wing2_rest,
        wing2_dial,
        params,
        LatticeKind::Bell,
    )?;
    compare_sets(&first, &second, samples, rng)
}

fn compare_sets(
    first: &AdmissibleSet,
    second: &AdmissibleSet,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<DependenceReport> {
    if samples < 100 {
        return Err(Error::Parameter {
            name: "samples",
            reason: format!("{samples} samples cannot support a bootstrap interval; need >= 100"),
        });
    }
    let draws_first = draw_keys(first, samples, rng);
    let draws_second = draw_keys(second, samples, rng);
    let distance = tv_distance(&draws_first, &draws_second);

    // Basic bootstrap: resample both draw vectors with replacement, collect
    // the resampled distances, and reflect their quantiles around the point
    // estimate (lo = 2·d − q97.5, hi = 2·d − q2.5).
    let mut resampled = Vec::with_capacity(BOOTSTRAP_RESAMPLES as usize);
    let mut buf_first = vec![0u64; draws_first.len()];
    let mut buf_second = vec![0u64; draws_second.len()];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        resample_into(&draws_first, &mut buf_first, rng);
        resample_into(&draws_second, &mut buf_second, rng);
        resampled.push(tv_distance(&buf_first, &buf_second));
    }
    resampled.sort_by(|a, b| a.partial_cmp(b).expect("TV distances are finite"));
    let ci_low = (2.0 * distance - quantile(&resampled, 0.975)).clamp(0.0, 1.0);
    let ci_high = (2.0 * distance - quantile(&resampled, 0.025)).clamp(0.0, 1.0);

    let verdict = if ci_low > 0.0 {
        DependenceVerdict::Dependent
    } else {
        DependenceVerdict::IndependentWithinTolerance
    };
    Ok(DependenceReport {
        first_setting: *first.final_selected(),
        second_setting: *second.final_selected(),
        samples_per_setting: samples,
        support_sizes: (first.len() as u64, second.len() as u64),
        distance,
        ci_low,
        ci_high,
        bootstrap_resamples: BOOTSTRAP_RESAMPLES,
        verdict,
    })
}

/// Samples admissible configurations and keys them by their exact identity:
/// lattice ring index in the high half, azimuth index in the low half.
fn draw_keys(set: &AdmissibleSet, samples: u64, rng: &mut impl Rng) -> Vec<u64> {
    (0..samples)
        .map(|_| {
            let pair = set.sample(rng);
            (u64::from(pair.cosine.index()) << 32) | u64::from(pair.azimuth_index)
        })
        .collect()
}

fn resample_into(source: &[u64], target: &mut [u64], rng: &mut impl Rng) {
    for slot in target.iter_mut() {
        *slot = source[uniform_index(rng, source.len())];
    }
}

/// Total-variation distance ½·Σ|p₁ − p₂| between the empirical distributions
/// of two equally sized key samples.
fn tv_distance(first: &[u64], second: &[u64]) -> f64 {
    let mut counts: HashMap<u64, (i64, i64)> = HashMap::new();
    for key in first {
        counts.entry(*key).or_default().0 += 1;
    }
    for key in second {
        counts.entry(*key).or_default().1 += 1;
    }
    let n1 = first.len() as f64;
    let n2 = second.len() as f64;
    0.5 * counts
        .values()
        .map(|(c1, c2)| (*c1 as f64 / n1 - *c2 as f64 / n2).abs())
        .sum::<f64>()
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let idx = (p * (sorted.len() as f64 - 1.0)).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}
