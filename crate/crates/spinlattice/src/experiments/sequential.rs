use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::TrajectoryIndex;
use crate::experiments::drift::DriftModel;
use crate::geometry::{
    membership_tolerance, nearest_allowed, LatticeKind, PhaseIndex, RationalCosine, UnitVector,
};
use crate::ontology::{mechanism, sample_k, ExperimenterChoice, ModelParams};
use crate::Result;

/// How an empirical cosine relates to the single-particle lattice: the raw
/// dot product, its nearest lattice member, the snap residual, and whether
/// that residual is within membership tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapReport {
    pub dot: f64,
    pub snapped: RationalCosine,
    pub residual: f64,
    pub on_lattice: bool,
}

impl SnapReport {
    pub fn for_dot(dot: f64, lattice_size: u32, kind: LatticeKind) -> Result<Self> {
        let snapped = nearest_allowed(dot.clamp(-1.0, 1.0), lattice_size, kind)?;
        let residual = (dot - snapped.value()).abs();
        Ok(Self {
            dot,
            snapped,
            residual,
            on_lattice: residual < membership_tolerance(lattice_size),
        })
    }
}

/// Relative azimuth of the third setting about the second, measured from the
/// plane of the first two, snapped to the discrete phase grid 2πl/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSnapReport {
    pub angle: f64,
    pub nearest: PhaseIndex,
    pub residual: f64,
}

/// Constraint diagnostics of one sequential three-apparatus run: whether the
/// neighbouring exact-setting cosines land on the single-particle lattice,
/// and the dihedral phase between the two measurement planes (absent when
/// consecutive settings are (anti)parallel).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequentialConstraintReport {
    pub first_pair: SnapReport,
    pub second_pair: SnapReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dihedral: Option<PhaseSnapReport>,
}

/// One sequential run: three apparatuses fire at their own times, each with
/// its exact rest orientation supplied by the drift model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialRunRecord {
    pub times: [f64; 3],
    pub rest_selected: [UnitVector; 3],
    pub rest_exact: [UnitVector; 3],
    pub dials: [UnitVector; 3],
    pub settings_exact: [UnitVector; 3],
    pub trajectory: TrajectoryIndex,
    pub report: SequentialConstraintReport,
}

/// Runs three apparatuses in sequence. The drift model pins each exact rest
/// orientation at its firing time; the mechanism carries each dial to its
/// exact setting; the report then records — without rejecting anything —
/// how the realized cosines relate to the lattice the model would demand.
///
/// One RNG word (the trajectory index).
pub fn run_sequential(
    params: &ModelParams,
    choices: &[ExperimenterChoice; 3],
    times: [f64; 3],
    drift: &DriftModel,
    rng: &mut impl Rng,
) -> Result<SequentialRunRecord> {
    let mut rest_exact = [UnitVector::z_axis(); 3];
    let mut settings = [UnitVector::z_axis(); 3];
    for (i, choice) in choices.iter().enumerate() {
        rest_exact[i] =
            drift.orientation_at(&choice.initial_selected, i as u64, params.delta(), times[i]);
        settings[i] = mechanism(&rest_exact[i], &choice.initial_selected, &choice.final_selected)?;
    }

    let report = constraint_report(params.lattice_size(), &settings)?;
    let trajectory = sample_k(params.lattice_size(), rng)?;

    Ok(SequentialRunRecord {
        times,
        rest_selected: [
            choices[0].initial_selected,
            choices[1].initial_selected,
            choices[2].initial_selected,
        ],
        rest_exact,
        dials: [
            choices[0].final_selected,
            choices[1].final_selected,
            choices[2].final_selected,
        ],
        settings_exact: settings,
        trajectory,
        report,
    })
}

/// Lattice diagnostics for an ordered exact-setting triple.
pub fn constraint_report(
    lattice_size: u32,
    settings: &[UnitVector; 3],
) -> Result<SequentialConstraintReport> {
    let first_pair = SnapReport::for_dot(
        settings[0].dot(&settings[1]),
        lattice_size,
        LatticeKind::Single,
    )?;
    let second_pair = SnapReport::for_dot(
        settings[1].dot(&settings[2]),
        lattice_size,
        LatticeKind::Single,
    )?;
    let dihedral = dihedral_phase(&settings[0], &settings[1], &settings[2], lattice_size)?;
    Ok(SequentialConstraintReport { first_pair, second_pair, dihedral })
}

/// Signed azimuth of `third` about `middle`, measured from the half-plane
/// containing `first`, normalized to [0, 2π) and snapped to the phase grid.
/// Returns None when either outer setting is (anti)parallel to the middle
/// one.
pub(crate) fn dihedral_phase(
    first: &UnitVector,
    middle: &UnitVector,
    third: &UnitVector,
    lattice_size: u32,
) -> Result<Option<PhaseSnapReport>> {
    let project = |v: &UnitVector| {
        let along = middle.dot(v);
        [
            v.x() - along * middle.x(),
            v.y() - along * middle.y(),
            v.z() - along * middle.z(),
        ]
    };
    let ta = project(first);
    let tc = project(third);
    let na = (ta[0] * ta[0] + ta[1] * ta[1] + ta[2] * ta[2]).sqrt();
    let nc = (tc[0] * tc[0] + tc[1] * tc[1] + tc[2] * tc[2]).sqrt();
    if na < 1e-12 || nc < 1e-12 {
        return Ok(None);
    }
    let cross = [
        ta[1] * tc[2] - ta[2] * tc[1],
        ta[2] * tc[0] - ta[0] * tc[2],
        ta[0] * tc[1] - ta[1] * tc[0],
    ];
    let sin_phi = (middle.x() * cross[0] + middle.y() * cross[1] + middle.z() * cross[2])
        / (na * nc);
    let cos_phi = (ta[0] * tc[0] + ta[1] * tc[1] + ta[2] * tc[2]) / (na * nc);
    let mut angle = sin_phi.atan2(cos_phi);
    if angle < 0.0 {
        angle += std::f64::consts::TAU;
    }
    let step = std::f64::consts::TAU / f64::from(lattice_size);
    let l = (angle / step).round() as u32; // ≤ N since angle < 2π
    let nearest = PhaseIndex::new(l, lattice_size)?;
    Ok(Some(PhaseSnapReport {
        angle,
        nearest,
        residual: (angle - nearest.angle()).abs(),
    }))
}
