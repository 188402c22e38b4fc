use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::UnitVector;
use crate::{Error, Result};

/// Open spherical cap {v : |v − center| < chord_radius}.
///
/// Radii are chord lengths, matching the resolution bound |exact − selected|
/// < Δ used everywhere in the model. In cosine terms the cap is
/// {v : v·center > 1 − r²/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    center: UnitVector,
    chord_radius: f64,
}

impl Cap {
    pub fn new(center: UnitVector, chord_radius: f64) -> Result<Self> {
        if !(chord_radius > 0.0 && chord_radius <= 2.0) {
            return Err(Error::Parameter {
                name: "chord_radius",
                reason: format!("must lie in (0, 2], got {chord_radius}"),
            });
        }
        Ok(Self { center, chord_radius })
    }

    pub fn center(&self) -> &UnitVector {
        &self.center
    }

    pub fn chord_radius(&self) -> f64 {
        self.chord_radius
    }

    /// Strict membership test (the cap is open).
    pub fn contains(&self, v: &UnitVector) -> bool {
        self.center.chord_to(v) < self.chord_radius
    }

    /// Uniform (area-measure) sample. Consumes exactly two f64 draws, which
    /// downstream replay guarantees rely on. cos θ is uniform on
    /// (1 − r²/2, 1]: the center is attainable, the rim is not, keeping the
    /// strict bound |sample − center| < r.
    pub fn sample_uniform(&self, rng: &mut impl Rng) -> UnitVector {
        let t: f64 = rng.gen(); // [0, 1)
        let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        self.point_at(1.0 - 0.5 * self.chord_radius * self.chord_radius * t, phi)
    }

    /// Sample with density ∝ exp(strength · v·toward) restricted to the cap,
    /// via rejection against the uniform sampler. Draw consumption is
    /// data-dependent, so this is kept out of replay-sensitive paths; it
    /// exists as the optional preparation-bias hook (default: off).
    pub fn sample_biased(
        &self,
        rng: &mut impl Rng,
        toward: &UnitVector,
        strength: f64,
    ) -> UnitVector {
        if strength == 0.0 {
            return self.sample_uniform(rng);
        }
        // Upper bound of v·toward over the cap for the acceptance scaling.
        let psi = self.center.angle_to(toward);
        let cap_angle = 2.0 * (self.chord_radius / 2.0).asin();
        let max_dot = ((psi - cap_angle).max(0.0)).cos();
        loop {
            let v = self.sample_uniform(rng);
            let w = (strength * (v.dot(toward) - max_dot)).exp().min(1.0);
            if rng.gen::<f64>() < w {
                return v;
            }
        }
    }

    /// Polar-angle CDF of the uniform law: F(θ) = (1 − cos θ)/(r²/2) for θ in
    /// [0, θ_max]. Test suites check sampled angles against this curve.
    pub fn polar_cdf(&self, theta: f64) -> f64 {
        let span = 0.5 * self.chord_radius * self.chord_radius;
        ((1.0 - theta.cos()) / span).clamp(0.0, 1.0)
    }

    /// Point at polar cosine `cos_theta` (relative to the center) and azimuth
    /// `phi` in the deterministic tangent frame of the center.
    pub fn point_at(&self, cos_theta: f64, phi: f64) -> UnitVector {
        let (e1, e2) = tangent_frame(&self.center);
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        UnitVector::combine(&[
            (cos_theta, &self.center),
            (sin_theta * phi.cos(), &e1),
            (sin_theta * phi.sin(), &e2),
        ])
        .expect("cap point construction cannot degenerate")
    }
}

/// Deterministic orthonormal frame (e1, e2) spanning the tangent plane of
/// `axis`: the seed basis vector is the coordinate axis least aligned with
/// `axis` (ties resolve x, then y, then z), Gram-Schmidt projected. Every
/// azimuth quoted in admissible-set bookkeeping refers to this frame.
pub fn tangent_frame(axis: &UnitVector) -> (UnitVector, UnitVector) {
    let [ax, ay, az] = axis.components();
    let abs = [ax.abs(), ay.abs(), az.abs()];
    let seed = if abs[0] <= abs[1] && abs[0] <= abs[2] {
        [1.0, 0.0, 0.0]
    } else if abs[1] <= abs[2] {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let dot = seed[0] * ax + seed[1] * ay + seed[2] * az;
    let e1 = UnitVector::new(seed[0] - dot * ax, seed[1] - dot * ay, seed[2] - dot * az)
        .expect("least-aligned axis cannot be parallel");
    let c = axis.cross(&e1);
    let e2 = UnitVector::new(c[0], c[1], c[2]).expect("cross of orthonormal pair is unit");
    (e1, e2)
}
