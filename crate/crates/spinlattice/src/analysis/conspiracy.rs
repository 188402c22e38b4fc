use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{Cap, LatticeKind, UnitVector};
use crate::ontology::{AdmissibleSet, ModelParams};
use crate::rng::{run_rng, uniform_index, Domain};
use crate::{Error, Result};

/// Worst-case plug-in mutual-information bias (bits) the experiment accepts
/// before demanding more runs.
const BIAS_CAP: f64 = 0.025;

/// How strongly the experimenter's "free" choice of wing-2 apparatus tracks
/// the one apparatus whose exact orientation is admissible.
///
/// Per run, every one of `apparatus_count` wing-2 apparatuses rests near the
/// same dial, but exactly one realizes an exact orientation admissible
/// against wing 1's exact setting. The initial conditions correlate the
/// experimenter's choice with that apparatus one-to-one — a correlation, not
/// a causal influence. The mutual information between choice and satisfier
/// then carries log₂(apparatus_count) bits, growing without bound in the
/// apparatus count, while an independent uniform choice carries none.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConspiracyReport {
    pub apparatus_count: u32,
    pub runs: u64,
    /// Plug-in estimate (bits) of I(choice; satisfier) under the model's
    /// coupled choice.
    pub mutual_information: f64,
    /// Fraction of runs in which the choice picked the satisfier.
    pub correlation_fraction: f64,
    /// Same estimator on an independent uniform choice.
    pub null_mutual_information: f64,
    /// Worst-case estimator bias (bits): count²/(2·runs·ln 2). Both MI
    /// estimates carry at most this much positive bias.
    pub bias_bound: f64,
}

/// Runs the many-apparatus selection experiment.
///
/// `apparatus_count` must lie in 2..=64 and `runs` must be at least 10⁴ and
/// large enough to keep the estimator bias below 0.025 bits.
pub fn conspiracy_experiment(
    params: &ModelParams,
    apparatus_count: u32,
    runs: u64,
    rng: &mut impl Rng,
) -> Result<ConspiracyReport> {
    if !(2..=64).contains(&apparatus_count) {
        return Err(Error::Parameter {
            name: "apparatus_count",
            reason: format!("must lie in 2..=64, got {apparatus_count}"),
        });
    }
    if runs < 10_000 {
        return Err(Error::Parameter {
            name: "runs",
            reason: format!("need at least 10000 runs, got {runs}"),
        });
    }
    let bias_bound =
        (apparatus_count as f64).powi(2) / (2.0 * runs as f64 * std::f64::consts::LN_2);
    if bias_bound > BIAS_CAP {
        return Err(Error::Parameter {
            name: "runs",
            reason: format!(
                "{runs} runs leave {bias_bound:.4} bits of estimator bias for \
                 {apparatus_count} apparatuses; the bound must stay below {BIAS_CAP}"
            ),
        });
    }

    let wing1_dial = UnitVector::z_axis();
    let wing2_dial = UnitVector::from_xz_angle(std::f64::consts::FRAC_PI_3);
    let wing1_cap = Cap::new(wing1_dial, params.delta())?;
    let wing2_cap = Cap::new(wing2_dial, params.delta())?;
    let base_seed: u64 = rng.gen();

    // (satisfier, coupled choice, null choice) per run, each run on its own
    // stream with a fixed draw budget.
    let draws: Vec<(u32, u32, u32)> = (0..runs)
        .into_par_iter()
        .map(|i| -> Result<(u32, u32, u32)> {
            let mut run = run_rng(base_seed, Domain::Conspiracy as u64, i);
            let wing1_exact = wing1_cap.sample_uniform(&mut run);
            let set = AdmissibleSet::build(
                &wing1_exact,
                &wing2_dial,
                &wing2_dial,
                params,
                LatticeKind::Bell,
            )?;
            let satisfier = uniform_index(&mut run, apparatus_count as usize) as u32;
            // Realize every apparatus: the satisfier draws from the
            // admissible set, the rest land anywhere in their cap (and are
            // admissible only with probability zero).
            let _exact = set.sample(&mut run);
            for _ in 1..apparatus_count {
                let _bystander = wing2_cap.sample_uniform(&mut run);
            }
            let coupled = satisfier;
            let null = uniform_index(&mut run, apparatus_count as usize) as u32;
            Ok((satisfier, coupled, null))
        })
        .collect::<Result<_>>()?;

    let k = apparatus_count as usize;
    let mut coupled_joint = vec![0u64; k * k];
    let mut null_joint = vec![0u64; k * k];
    let mut agreements = 0u64;
    for (satisfier, coupled, null) in &draws {
        coupled_joint[*coupled as usize * k + *satisfier as usize] += 1;
        null_joint[*null as usize * k + *satisfier as usize] += 1;
        agreements += u64::from(coupled == satisfier);
    }

    Ok(ConspiracyReport {
        apparatus_count,
        runs,
        mutual_information: plug_in_mi(&coupled_joint, k, runs),
        correlation_fraction: agreements as f64 / runs as f64,
        null_mutual_information: plug_in_mi(&null_joint, k, runs),
        bias_bound,
    })
}

/// Plug-in mutual information (bits) of a k×k joint count table.
fn plug_in_mi(joint: &[u64], k: usize, total: u64) -> f64 {
    let total = total as f64;
    let mut row = vec![0u64; k];
    let mut col = vec![0u64; k];
    for x in 0..k {
        for y in 0..k {
            row[x] += joint[x * k + y];
            col[y] += joint[x * k + y];
        }
    }
    let mut mi = 0.0;
    for x in 0..k {
        for y in 0..k {
            let c = joint[x * k + y];
            if c == 0 {
                continue;
            }
            let p_xy = c as f64 / total;
            let p_x = row[x] as f64 / total;
            let p_y = col[y] as f64 / total;
            mi += p_xy * (p_xy / (p_x * p_y)).log2();
        }
    }
    mi.max(0.0)
}
