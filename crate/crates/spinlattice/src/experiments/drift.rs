use serde::{Deserialize, Serialize};

use crate::geometry::{tangent_frame, Rotation, UnitVector};
use crate::rng::{run_rng, Domain};

/// Deterministic in-cap wander of an apparatus's exact rest orientation.
///
/// Each apparatus precesses along a great circle toward a pseudo-random
/// tangent direction (fixed by the drift seed and the apparatus id), with the
/// polar excursion following a triangle wave that reflects at a fraction of
/// the Δ-cap boundary — the orientation never leaves the open cap, never
/// repeats within a reflection period, and is a pure function of
/// (seed, apparatus, time).
///
/// `angular_rate` is radians of polar excursion per unit time; rate 0 pins
/// the exact orientation to the selected one (the zero-error control).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftModel {
    angular_rate: f64,
    seed: u64,
}

impl DriftModel {
    pub fn new(angular_rate: f64, seed: u64) -> Self {
        Self { angular_rate: angular_rate.abs(), seed }
    }

    /// The zero-error control: exact rest orientation equals the selected one
    /// at all times.
    pub fn frozen() -> Self {
        Self { angular_rate: 0.0, seed: 0 }
    }

    pub fn angular_rate(&self) -> f64 {
        self.angular_rate
    }

    pub fn is_frozen(&self) -> bool {
        self.angular_rate == 0.0
    }

    /// Exact rest orientation of apparatus `apparatus_id` at time `t`, for an
    /// apparatus whose selected rest orientation is `selected` under
    /// resolution bound `delta`.
    pub fn orientation_at(
        &self,
        selected: &UnitVector,
        apparatus_id: u64,
        delta: f64,
        t: f64,
    ) -> UnitVector {
        if self.angular_rate == 0.0 {
            return *selected;
        }
        // Keep the excursion strictly inside the cap: 90% of its angular
        // radius.
        let cap_angle = 2.0 * (delta / 2.0).asin();
        let max_excursion = 0.9 * cap_angle;

        // Per-apparatus pseudo-random drift direction in the tangent plane.
        let mut dir_rng = run_rng(self.seed, Domain::Drift as u64, apparatus_id);
        let phi = std::f64::consts::TAU * rand::Rng::gen::<f64>(&mut dir_rng);

        // Triangle wave in [0, max_excursion], reflecting at both ends.
        let span = self.angular_rate * t.abs();
        let period = 2.0 * max_excursion;
        let folded = span % period;
        let excursion = if folded <= max_excursion { folded } else { period - folded };

        let (e1, e2) = tangent_frame(selected);
        let axis_raw = UnitVector::combine(&[(-phi.sin(), &e1), (phi.cos(), &e2)])
            .expect("tangent combination is unit length");
        Rotation::from_axis_angle(&axis_raw, excursion).apply(selected)
    }
}
