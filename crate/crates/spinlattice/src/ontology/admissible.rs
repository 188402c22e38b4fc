//! Enumeration of the exact settings an apparatus can realize.
//!
//! Relative to an exact partner axis, the realizable exact settings live on
//! the lattice rings (fixed rational cosine with the partner), discretized
//! in azimuth. Three filters cut the rings down to the admissible set:
//!
//! 1. the exact setting must lie within chord Δ of the dialed setting,
//! 2. it must be realizable by *some* exact rest orientation — always true,
//!    via the inverse mechanism — and
//! 3. that rest orientation must itself lie within chord Δ of the selected
//!    rest orientation.
//!
//! The third filter is what makes the set depend on the apparatus history
//! and not only on the dialed setting: the inverse mechanism stretches
//! displacements anisotropically, so settings equidistant from the dial can
//! require rest orientations on opposite sides of the support boundary.

use std::f64::consts::TAU;

use rand::Rng;

use crate::geometry::{tangent_frame, LatticeKind, RationalCosine, UnitVector};
use crate::ontology::hidden::ExactSettingPair;
use crate::ontology::mechanism::mechanism_inverse;
use crate::ontology::params::ModelParams;
use crate::rng::uniform_index;
use crate::{Error, Result};

/// All admissible exact settings of one apparatus, given the exact axis of
/// its partner (preparation axis or other wing) and the apparatus's own
/// selected history.
#[derive(Debug, Clone)]
pub struct AdmissibleSet {
    partner: UnitVector,
    initial_selected: UnitVector,
    final_selected: UnitVector,
    kind: LatticeKind,
    lattice_size: u32,
    azimuth_steps: u32,
    delta: f64,
    pairs: Vec<ExactSettingPair>,
}

impl AdmissibleSet {
    /// Enumerates the admissible set; errors if it is empty.
    ///
    /// Ring-by-ring, the Δ-cap around the dialed setting cuts an azimuth
    /// interval out of the ring (or swallows it whole, or misses it); only
    /// grid points inside a slightly widened interval are tested exactly,
    /// so the cost scales with the ring count plus the surviving candidates,
    /// not with `azimuth_steps` times the ring count.
    pub fn build(
        partner_exact: &UnitVector,
        initial_selected: &UnitVector,
        final_selected: &UnitVector,
        params: &ModelParams,
        kind: LatticeKind,
    ) -> Result<Self> {
        let n_total = params.lattice_size();
        let steps = params.azimuth_steps();
        let delta = params.delta();
        let cap_cos = 1.0 - delta * delta / 2.0;

        let (e1, e2) = tangent_frame(partner_exact);
        let phi_b = final_selected.dot(&e2).atan2(final_selected.dot(&e1));
        let step_angle = TAU / f64::from(steps);

        // Rings live at polar angle θ from the partner; points of the cap lie
        // at polar angles within α of ψ = angle(partner, dial), where α is the
        // cap's angular radius (cos α = 1 − Δ²/2). A ring can intersect the
        // cap only if its cosine lies in [cos(ψ+α), cos(ψ−α)], so only the
        // ring indices mapping into that band (±1 for rounding) are examined —
        // the scan cost is the band population, not the lattice size.
        let c_psi = partner_exact.dot(final_selected).clamp(-1.0, 1.0);
        let s_psi = (1.0 - c_psi * c_psi).max(0.0).sqrt();
        let sin_alpha = delta * (1.0 - delta * delta / 4.0).max(0.0).sqrt();
        let r_hi = (c_psi * cap_cos + s_psi * sin_alpha).min(1.0);
        let r_lo = (c_psi * cap_cos - s_psi * sin_alpha).max(-1.0);
        let n_f = f64::from(n_total);
        let index_of = |r: f64| match kind {
            LatticeKind::Single => (n_f + 2.0 - r * n_f) / 4.0,
            LatticeKind::Bell => (n_f - r * n_f) / 4.0,
        };
        let half = i64::from(n_total / 2);
        let n_first = (index_of(r_hi).floor() as i64 - 1).clamp(1, half) as u32;
        let n_last = (index_of(r_lo).ceil() as i64 + 1).clamp(1, half) as u32;

        let mut pairs = Vec::new();
        let mut nearest_ring_chord = f64::INFINITY;

        for n in n_first..=n_last {
            let cosine = RationalCosine::from_kind(n_total, n, kind)?;
            let r = cosine.value();
            let s = (1.0 - r * r).max(0.0).sqrt();
            // cos of the nearest/farthest angular distance from the dial to
            // the ring: cos(θ ∓ ψ) = r·cosψ ± sinθ·sinψ.
            let cos_d_min = (r * c_psi + s * s_psi).clamp(-1.0, 1.0);
            let cos_d_max = (r * c_psi - s * s_psi).clamp(-1.0, 1.0);
            let chord_min = (2.0 - 2.0 * cos_d_min).max(0.0).sqrt();
            if chord_min >= delta {
                nearest_ring_chord = nearest_ring_chord.min(chord_min);
                continue;
            }
            let full_ring = 2.0 - 2.0 * cos_d_max < delta * delta;

            let candidates: Box<dyn Iterator<Item = u32>> = if s < 1e-12 {
                // Degenerate ring: a single point at the partner's antipode.
                Box::new(std::iter::once(0))
            } else if full_ring {
                Box::new(0..steps)
            } else {
                let denom = s * s_psi;
                if denom < 1e-15 {
                    // Ring and cap boundary graze within rounding; let the
                    // exact per-candidate test decide.
                    Box::new(0..steps)
                } else {
                    let a = ((cap_cos - r * c_psi) / denom).clamp(-1.0, 1.0);
                    let w = a.acos();
                    let lo = ((phi_b - w) / step_angle).floor() as i64 - 1;
                    let hi = ((phi_b + w) / step_angle).ceil() as i64 + 1;
                    if hi - lo + 1 >= i64::from(steps) {
                        Box::new(0..steps)
                    } else {
                        let steps_i = i64::from(steps);
                        Box::new((lo..=hi).map(move |j| j.rem_euclid(steps_i) as u32))
                    }
                }
            };

            let mut hit_this_ring = false;
            for j in candidates {
                let phi = f64::from(j) * step_angle;
                let setting = UnitVector::combine(&[
                    (r, partner_exact),
                    (s * phi.cos(), &e1),
                    (s * phi.sin(), &e2),
                ])?;
                let to_dial = setting.chord_to(final_selected);
                if to_dial >= delta {
                    continue;
                }
                hit_this_ring = true;
                let Ok(apparatus) = mechanism_inverse(&setting, initial_selected, final_selected)
                else {
                    continue;
                };
                if apparatus.chord_to(initial_selected) >= delta {
                    continue;
                }
                pairs.push(ExactSettingPair { setting, apparatus, cosine, azimuth_index: j });
            }
            if !hit_this_ring {
                nearest_ring_chord = nearest_ring_chord.min(chord_min.max(0.0));
            }
        }

        if pairs.is_empty() {
            return Err(Error::Infeasible {
                lattice_size: n_total,
                delta,
                nearest_ring_chord,
                reachable_chord: delta,
            });
        }

        Ok(Self {
            partner: *partner_exact,
            initial_selected: *initial_selected,
            final_selected: *final_selected,
            kind,
            lattice_size: n_total,
            azimuth_steps: steps,
            delta,
            pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&ExactSettingPair> {
        self.pairs.get(index)
    }

    pub fn pairs(&self) -> &[ExactSettingPair] {
        &self.pairs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExactSettingPair> {
        self.pairs.iter()
    }

    /// Uniform draw; consumes exactly one 64-bit RNG word.
    pub fn sample(&self, rng: &mut impl Rng) -> ExactSettingPair {
        self.pairs[uniform_index(rng, self.pairs.len())]
    }

    pub fn partner(&self) -> &UnitVector {
        &self.partner
    }

    pub fn initial_selected(&self) -> &UnitVector {
        &self.initial_selected
    }

    pub fn final_selected(&self) -> &UnitVector {
        &self.final_selected
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn lattice_size(&self) -> u32 {
        self.lattice_size
    }

    pub fn azimuth_steps(&self) -> u32 {
        self.azimuth_steps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl<'a> IntoIterator for &'a AdmissibleSet {
    type Item = &'a ExactSettingPair;
    type IntoIter = std::slice::Iter<'a, ExactSettingPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}
