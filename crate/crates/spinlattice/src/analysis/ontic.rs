use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Cap, UnitVector};
use crate::ontology::{mechanism, sample_preparation_hv, ExperimenterChoice, ModelParams};
use crate::{Error, Result};

/// Side length (in bins) of the tangent-plane histogram used for the
/// continuous overlap estimate.
const HISTOGRAM_BINS: usize = 32;

/// How the hidden-state supports of two preparations relate.
///
/// Each preparation confines the exact prepared setting to an open cap of
/// chord radius Δ around its dial, so two dials further apart than 2Δ have
/// provably disjoint supports. The report quantifies that three ways: by the
/// fraction of draws from each preparation landing inside the other's cap,
/// by the overlap of binned empirical distributions, and by replaying the
/// deterministic map from hidden state to prepared setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportOverlapReport {
    pub first_dial: UnitVector,
    pub second_dial: UnitVector,
    /// Chord distance between the dials.
    pub separation: f64,
    /// True when the dials sit closer than 2Δ, so the supports may
    /// intersect: the preparations are finer than the model resolves.
    pub sub_resolution: bool,
    pub samples_per_preparation: u64,
    /// (fraction of first-preparation draws inside the second cap,
    ///  fraction of second-preparation draws inside the first cap).
    pub cross_support_fraction: (f64, f64),
    /// Σ min(p̂₁, p̂₂) over a shared 32×32 tangent-plane histogram of the
    /// exact prepared settings; 0 for disjoint supports, near 1 for
    /// identical preparations (sampling noise keeps it below 1).
    pub histogram_overlap: f64,
    /// True when every draw's exact prepared setting is reproduced exactly
    /// by re-applying the orientation mechanism to its hidden rest state.
    pub deterministic_preparation: bool,
}

/// Samples both preparations and measures how their exact-setting supports
/// overlap. `samples` draws per preparation, at least 100.
pub fn psi_ontic_check(
    params: &ModelParams,
    first_dial: &UnitVector,
    second_dial: &UnitVector,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<SupportOverlapReport> {
    if samples < 100 {
        return Err(Error::Parameter {
            name: "samples",
            reason: format!("need at least 100 draws per preparation, got {samples}"),
        });
    }
    let delta = params.delta();
    let first_cap = Cap::new(*first_dial, delta)?;
    let second_cap = Cap::new(*second_dial, delta)?;
    // The apparatus rests at its dial, so the prepared setting inherits the
    // rest's cap distribution directly.
    let first_choice = ExperimenterChoice::new(*first_dial, *first_dial);
    let second_choice = ExperimenterChoice::new(*second_dial, *second_dial);

    let (first_draws, first_deterministic) =
        draw_settings(&first_choice, params, samples, rng)?;
    let (second_draws, second_deterministic) =
        draw_settings(&second_choice, params, samples, rng)?;
    let deterministic = first_deterministic && second_deterministic;

    let inside = |draws: &[UnitVector], cap: &Cap| {
        draws.iter().filter(|v| cap.contains(v)).count() as f64 / samples as f64
    };
    let cross_support_fraction = (
        inside(&first_draws, &second_cap),
        inside(&second_draws, &first_cap),
    );

    let separation = first_dial.chord_to(second_dial);
    let histogram_overlap = histogram_overlap(
        first_dial,
        second_dial,
        delta,
        &first_draws,
        &second_draws,
    )?;

    Ok(SupportOverlapReport {
        first_dial: *first_dial,
        second_dial: *second_dial,
        separation,
        sub_resolution: separation < 2.0 * delta,
        samples_per_preparation: samples,
        cross_support_fraction,
        histogram_overlap,
        deterministic_preparation: deterministic,
    })
}

/// Draws `samples` preparations and replays the orientation mechanism on
/// each hidden rest state, reporting whether every replay reproduced the
/// recorded exact setting.
fn draw_settings(
    choice: &ExperimenterChoice,
    params: &ModelParams,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<(Vec<UnitVector>, bool)> {
    let mut settings = Vec::with_capacity(samples as usize);
    let mut deterministic = true;
    for _ in 0..samples {
        let draw = sample_preparation_hv(choice, params, rng, None)?;
        let replayed = mechanism(
            &draw.prep_exact,
            &choice.initial_selected,
            &choice.final_selected,
        )?;
        if replayed != draw.setting_exact {
            deterministic = false;
        }
        settings.push(draw.setting_exact);
    }
    Ok((settings, deterministic))
}

/// Bins both draw sets over one shared square patch of the tangent plane at
/// the midpoint of the dials and returns Σ min(p̂₁, p̂₂).
fn histogram_overlap(
    first_dial: &UnitVector,
    second_dial: &UnitVector,
    delta: f64,
    first_draws: &[UnitVector],
    second_draws: &[UnitVector],
) -> Result<f64> {
    // Midpoint of the dials; for (near-)antipodal dials the supports cannot
    // overlap anyway, so centering the patch on the first dial is harmless.
    let center = UnitVector::combine(&[(1.0, first_dial), (1.0, second_dial)])
        .unwrap_or(*first_dial);
    let helper = if center.x().abs() < 0.9 {
        UnitVector::new(1.0, 0.0, 0.0)?
    } else {
        UnitVector::new(0.0, 1.0, 0.0)?
    };
    let e1_raw = center.cross(&helper);
    let e1 = UnitVector::new(e1_raw[0], e1_raw[1], e1_raw[2])?;
    let e2_raw = center.cross(&e1);
    let e2 = UnitVector::new(e2_raw[0], e2_raw[1], e2_raw[2])?;

    // Wide enough to hold both caps: half the dial separation plus the cap
    // radius, with slack for the projection curvature.
    let half_width = 0.5 * first_dial.chord_to(second_dial) + 1.5 * delta;
    let bin = |v: &UnitVector| -> usize {
        let u = v.dot(&e1);
        let w = v.dot(&e2);
        let to_index = |coord: f64| -> usize {
            let scaled = (coord + half_width) / (2.0 * half_width) * HISTOGRAM_BINS as f64;
            (scaled.floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
        };
        to_index(u) * HISTOGRAM_BINS + to_index(w)
    };

    let mut first_hist = vec![0u64; HISTOGRAM_BINS * HISTOGRAM_BINS];
    let mut second_hist = vec![0u64; HISTOGRAM_BINS * HISTOGRAM_BINS];
    for v in first_draws {
        first_hist[bin(v)] += 1;
    }
    for v in second_draws {
        second_hist[bin(v)] += 1;
    }
    let samples = first_draws.len() as f64;
    Ok(first_hist
        .iter()
        .zip(&second_hist)
        .map(|(a, b)| (*a).min(*b) as f64)
        .sum::<f64>()
        / samples)
}
