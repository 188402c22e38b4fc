use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::experiments::{
    constraint_report, dihedral_phase, run_sequential, BellRunRecord, DriftModel,
    SequentialConstraintReport, SequentialRunRecord, SnapReport,
};
use crate::geometry::{
    cos_rational_class, nearest_rational_angle, LatticeKind, SphericalTriangle, UnitVector,
};
use crate::ontology::{mechanism, ExperimenterChoice, ModelParams};
use crate::rng::{run_rng, Domain};
use crate::Result;

/// Which hypothetical rearrangement of a three-apparatus run to audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterfactualMode {
    /// Apparatuses keep their slots and times; the second and third dials
    /// are exchanged.
    Orientations,
    /// Apparatuses keep their dials; the second and third measurement times
    /// are exchanged, so each rest orientation is re-evaluated at its new
    /// time.
    Order,
}

/// Rationality classification of one angle, as a fraction of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleClass {
    /// The angle in radians.
    pub angle: f64,
    /// Best rational approximation angle/π ≈ numerator/denominator with
    /// denominator ≤ 100.
    pub numerator: i64,
    pub denominator: u64,
    /// |angle/π − numerator/denominator|.
    pub residual: f64,
    /// True when the angle is (numerically) a rational multiple of π.
    pub is_rational_multiple: bool,
    /// When the angle is pπ/q, the exact rational value of its cosine if one
    /// exists. Only five cosine values are possible: 0, ±1/2, ±1.
    pub rational_cosine: Option<(i64, i64)>,
}

impl AngleClass {
    pub fn of(angle: f64) -> Result<Self> {
        let (numerator, denominator, residual) = nearest_rational_angle(
            angle / std::f64::consts::PI,
            100,
        );
        let is_rational_multiple = residual < 1e-9;
        let rational_cosine = if is_rational_multiple {
            cos_rational_class(numerator, denominator as i64)?
        } else {
            None
        };
        Ok(Self {
            angle,
            numerator,
            denominator,
            residual,
            is_rational_multiple,
            rational_cosine,
        })
    }
}

/// The spherical triangle spanned by an exact-setting triple, with each
/// vertex angle classified for rationality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleDiagnostics {
    pub vertex_angles: [f64; 3],
    pub classes: [AngleClass; 3],
}

impl TriangleDiagnostics {
    /// None when the triple is degenerate (two settings (anti)parallel).
    fn for_triple(settings: &[UnitVector; 3]) -> Result<Option<Self>> {
        let Ok(triangle) = SphericalTriangle::new(settings[0], settings[1], settings[2]) else {
            return Ok(None);
        };
        let vertex_angles = triangle.vertex_angles();
        Ok(Some(Self {
            vertex_angles,
            classes: [
                AngleClass::of(vertex_angles[0])?,
                AngleClass::of(vertex_angles[1])?,
                AngleClass::of(vertex_angles[2])?,
            ],
        }))
    }
}

/// Side-by-side audit of a hypothetical rearrangement: the settings and
/// lattice verdicts that naive counterfactual reasoning assumes (the original
/// exact settings, reordered) against the ones the model actually produces
/// (recomputed through the orientation mechanism).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterfactualVerdict {
    /// Exact settings realized in the audited run(s), in measurement order.
    pub original_settings: [UnitVector; 3],
    /// The reordered originals that naive reasoning treats as realizable.
    pub naive_settings: [UnitVector; 3],
    /// What the mechanism would actually realize under the rearrangement.
    pub model_settings: [UnitVector; 3],
    pub naive_report: SequentialConstraintReport,
    pub model_report: SequentialConstraintReport,
    /// True when both consecutive dot products land on their lattices.
    pub naive_admissible: bool,
    pub model_admissible: bool,
    pub naive_triangle: Option<TriangleDiagnostics>,
    pub model_triangle: Option<TriangleDiagnostics>,
}

fn admissible(report: &SequentialConstraintReport) -> bool {
    report.first_pair.on_lattice && report.second_pair.on_lattice
}

/// Audits a hypothetical rearrangement of a recorded three-apparatus run.
///
/// Measurement order is first, second, third; the rearrangement swaps the
/// roles of the second and third measurements. Naive reasoning keeps the
/// recorded exact settings and merely reorders them; the model instead
/// re-derives each exact setting from the rest orientation its apparatus has
/// at its measurement slot (re-evaluated under `drift` when the slot's time
/// changes) and the dial it is given.
pub fn counterfactual_sequential(
    params: &ModelParams,
    record: &SequentialRunRecord,
    mode: CounterfactualMode,
    drift: &DriftModel,
) -> Result<CounterfactualVerdict> {
    let original = record.settings_exact;
    let naive = [original[0], original[2], original[1]];

    let model = match mode {
        CounterfactualMode::Orientations => {
            // Same apparatuses at the same times, dialed to each other's
            // settings.
            let second = mechanism(
                &record.rest_exact[1],
                &record.rest_selected[1],
                &record.dials[2],
            )?;
            let third = mechanism(
                &record.rest_exact[2],
                &record.rest_selected[2],
                &record.dials[1],
            )?;
            [original[0], second, third]
        }
        CounterfactualMode::Order => {
            // Same dials, swapped slots: each rest orientation is what its
            // apparatus drifts to at the other measurement time.
            let third_rest_early = drift.orientation_at(
                &record.rest_selected[2],
                2,
                params.delta(),
                record.times[1],
            );
            let second_rest_late = drift.orientation_at(
                &record.rest_selected[1],
                1,
                params.delta(),
                record.times[2],
            );
            let second = mechanism(&third_rest_early, &record.rest_selected[2], &record.dials[2])?;
            let third = mechanism(&second_rest_late, &record.rest_selected[1], &record.dials[1])?;
            [original[0], second, third]
        }
    };

    let naive_report = constraint_report(params.lattice_size(), &naive)?;
    let model_report = constraint_report(params.lattice_size(), &model)?;
    Ok(CounterfactualVerdict {
        original_settings: original,
        naive_settings: naive,
        naive_admissible: admissible(&naive_report),
        model_admissible: admissible(&model_report),
        naive_triangle: TriangleDiagnostics::for_triple(&naive)?,
        model_triangle: TriangleDiagnostics::for_triple(&model)?,
        naive_report,
        model_report,
        model_settings: model,
    })
}

/// Audits the swap of a singlet run's wing-1 dial b̂ for an alternative b̂′.
///
/// `record` is the realized run (wing-1 dial b̂ under `first_choice`);
/// `second_choice` and `second_rest_exact` describe a companion run whose
/// apparatus, resting exactly at `second_rest_exact`, dialed b̂′. Naive
/// reasoning compares the triangle of the two realized settings with the
/// shared wing-2 setting Ĉ; the model first transports each dial through the
/// *other* run's rest state, comparing the settings that would actually have
/// been realized.
///
/// In each triple [X, Y, Ĉ]: X·Y is checked against the single-particle
/// lattice (two measurements on the same wing) and X·Ĉ against the
/// singlet lattice, with the dihedral phase of the triple alongside.
pub fn counterfactual_bell(
    params: &ModelParams,
    record: &BellRunRecord,
    first_choice: &ExperimenterChoice,
    second_choice: &ExperimenterChoice,
    second_rest_exact: &UnitVector,
) -> Result<CounterfactualVerdict> {
    let realized_first = record.wing1_setting_exact;
    let wing2 = record.wing2_setting.setting;
    // What the companion run realized with the alternative dial.
    let realized_second = mechanism(
        second_rest_exact,
        &second_choice.initial_selected,
        &second_choice.final_selected,
    )?;

    let original = [realized_first, realized_second, wing2];
    // Naive: the alternative run's setting stands in for "what this run
    // would have measured".
    let naive = [realized_second, realized_first, wing2];
    // Model: each dial re-derived through the other run's rest state.
    let model_first = mechanism(
        &record.hidden.apparatus1_exact,
        &first_choice.initial_selected,
        &second_choice.final_selected,
    )?;
    let model_second = mechanism(
        second_rest_exact,
        &second_choice.initial_selected,
        &first_choice.final_selected,
    )?;
    let model = [model_first, model_second, wing2];

    let naive_report = mixed_pair_report(params.lattice_size(), &naive)?;
    let model_report = mixed_pair_report(params.lattice_size(), &model)?;
    Ok(CounterfactualVerdict {
        original_settings: original,
        naive_settings: naive,
        naive_admissible: admissible(&naive_report),
        model_admissible: admissible(&model_report),
        naive_triangle: TriangleDiagnostics::for_triple(&naive)?,
        model_triangle: TriangleDiagnostics::for_triple(&model)?,
        naive_report,
        model_report,
        model_settings: model,
    })
}

/// Constraint report for a [wing-1, wing-1, wing-2] triple: the first dot
/// product answers to the single-particle lattice, the second (first setting
/// against the wing-2 setting) to the singlet lattice.
fn mixed_pair_report(
    lattice_size: u32,
    settings: &[UnitVector; 3],
) -> Result<SequentialConstraintReport> {
    let first_pair = SnapReport::for_dot(
        settings[0].dot(&settings[1]),
        lattice_size,
        LatticeKind::Single,
    )?;
    let second_pair = SnapReport::for_dot(
        settings[0].dot(&settings[2]),
        lattice_size,
        LatticeKind::Bell,
    )?;
    let dihedral = dihedral_phase(&settings[1], &settings[0], &settings[2], lattice_size)?;
    Ok(SequentialConstraintReport { first_pair, second_pair, dihedral })
}

/// Aggregate counterfactual audit over many drifting runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterfactualCensus {
    pub runs: u64,
    pub mode: CounterfactualMode,
    /// Runs whose reordered originals still satisfied the lattice.
    pub naive_admissible: u64,
    /// Runs whose mechanism-derived settings satisfied the lattice.
    pub model_admissible: u64,
    /// Runs where the two verdicts differ.
    pub disagreements: u64,
    /// First run index (0-based) with differing verdicts, if any.
    pub first_disagreement: Option<u64>,
}

/// Runs `runs` sequential experiments at staggered times and audits each one
/// under `mode`. Each run occupies its own RNG stream and starts `cycle`
/// later than the previous one, so the drifting rest orientations differ run
/// to run while the whole census stays deterministic for a fixed seed.
pub fn counterfactual_census(
    params: &ModelParams,
    choices: &[ExperimenterChoice; 3],
    base_times: [f64; 3],
    cycle: f64,
    drift: &DriftModel,
    mode: CounterfactualMode,
    runs: u64,
) -> Result<CounterfactualCensus> {
    let verdicts: Vec<(bool, bool)> = (0..runs)
        .into_par_iter()
        .map(|i| -> Result<(bool, bool)> {
            let mut rng = run_rng(params.seed(), Domain::Sequential as u64, i);
            let times = [
                base_times[0] + i as f64 * cycle,
                base_times[1] + i as f64 * cycle,
                base_times[2] + i as f64 * cycle,
            ];
            let record = run_sequential(params, choices, times, drift, &mut rng)?;
            let verdict = counterfactual_sequential(params, &record, mode, drift)?;
            Ok((verdict.naive_admissible, verdict.model_admissible))
        })
        .collect::<Result<_>>()?;

    let mut census = CounterfactualCensus {
        runs,
        mode,
        naive_admissible: 0,
        model_admissible: 0,
        disagreements: 0,
        first_disagreement: None,
    };
    for (i, (naive, model)) in verdicts.iter().enumerate() {
        census.naive_admissible += u64::from(*naive);
        census.model_admissible += u64::from(*model);
        if naive != model {
            census.disagreements += 1;
            census.first_disagreement.get_or_insert(i as u64);
        }
    }
    Ok(census)
}
