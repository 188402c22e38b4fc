//! The finite lattices of admissible cosines between paired exact settings.
//!
//! For lattice size N (even, ≥ 4) the two families are
//!
//! * single-particle:  cos = 1 − (2n−1)/(N/2) = (N − 4n + 2)/N,  n = 1..N/2
//! * singlet pair:     cos = 1 − 4n/N         = (N − 4n)/N,      n = 1..N/2
//!
//! Both have N/2 members spaced exactly 4/N apart. The single-particle family
//! excludes ±1 (its extreme members are ±(1 − 2/N)); the pair family excludes
//! +1 but contains −1 exactly (n = N/2). Values are stored and compared as
//! integer fractions — floating point never decides membership.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which pairing a cosine constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    /// Preparation–measurement pairs of one particle.
    Single,
    /// The two measurement settings acting on a singlet pair.
    Bell,
}

/// One admissible cosine, kept as the exact fraction `numerator/denominator`
/// (denominator = lattice size N) together with its lattice index n.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RationalCosine {
    numerator: i64,
    denominator: i64,
    index: u32,
    kind: LatticeKind,
}

impl RationalCosine {
    /// n-th single-particle cosine: (N − 4n + 2)/N.
    pub fn single(lattice_size: u32, index: u32) -> Result<Self> {
        validate_lattice_size(lattice_size)?;
        validate_index(lattice_size, index)?;
        let n_i64 = i64::from(lattice_size);
        Ok(Self {
            numerator: n_i64 - 4 * i64::from(index) + 2,
            denominator: n_i64,
            index,
            kind: LatticeKind::Single,
        })
    }

    /// n-th pair cosine: (N − 4n)/N.
    pub fn bell(lattice_size: u32, index: u32) -> Result<Self> {
        validate_lattice_size(lattice_size)?;
        validate_index(lattice_size, index)?;
        let n_i64 = i64::from(lattice_size);
        Ok(Self {
            numerator: n_i64 - 4 * i64::from(index),
            denominator: n_i64,
            index,
            kind: LatticeKind::Bell,
        })
    }

    pub fn from_kind(lattice_size: u32, index: u32, kind: LatticeKind) -> Result<Self> {
        match kind {
            LatticeKind::Single => Self::single(lattice_size, index),
            LatticeKind::Bell => Self::bell(lattice_size, index),
        }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    /// Always the lattice size N.
    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Lattice index n ∈ {1, …, N/2}.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn lattice_size(&self) -> u32 {
        self.denominator as u32
    }

    /// Floating-point value, for geometry; never used for membership logic.
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// N·(1 − cos)/2 for single cosines — always the odd integer 2n−1;
    /// N·(1 − cos)/4 for pair cosines — always the integer n. Exposed so
    /// callers can assert constraint identities in integer arithmetic.
    pub fn constraint_integer(&self) -> i64 {
        match self.kind {
            LatticeKind::Single => 2 * i64::from(self.index) - 1,
            LatticeKind::Bell => i64::from(self.index),
        }
    }
}

impl PartialEq for RationalCosine {
    /// Exact equality: same kind and same rational value (cross-multiplied,
    /// no floating point involved).
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.numerator * other.denominator == other.numerator * self.denominator
    }
}

impl Eq for RationalCosine {}

/// All admissible cosines for the given lattice size and kind, in strictly
/// decreasing order (n = 1 first).
pub fn allowed_cosines(lattice_size: u32, kind: LatticeKind) -> Result<Vec<RationalCosine>> {
    validate_lattice_size(lattice_size)?;
    (1..=lattice_size / 2)
        .map(|n| RationalCosine::from_kind(lattice_size, n, kind))
        .collect()
}

/// The admissible cosine nearest to `target` ∈ [−1, 1]. Exact ties between
/// neighbours resolve toward the larger index (the more negative cosine).
pub fn nearest_allowed(target: f64, lattice_size: u32, kind: LatticeKind) -> Result<RationalCosine> {
    validate_lattice_size(lattice_size)?;
    if !(-1.0..=1.0).contains(&target) {
        return Err(Error::Domain(format!(
            "cosine target {target} outside [-1, 1]"
        )));
    }
    let n_f = f64::from(lattice_size);
    let half = lattice_size / 2;
    // Invert the value formula for a real-valued index, then compare the two
    // surrounding integers. Distances are compared as |target·N − numerator|,
    // where the numerator is exactly representable, so genuine ties are
    // detected reliably.
    let raw = match kind {
        LatticeKind::Single => (n_f + 2.0 - target * n_f) / 4.0,
        LatticeKind::Bell => (n_f - target * n_f) / 4.0,
    };
    let lo = (raw.floor() as i64).clamp(1, i64::from(half)) as u32;
    let hi = (raw.ceil() as i64).clamp(1, i64::from(half)) as u32;
    let scaled = target * n_f;
    let candidate = |n: u32| -> Result<(f64, RationalCosine)> {
        let c = RationalCosine::from_kind(lattice_size, n, kind)?;
        Ok(((scaled - c.numerator() as f64).abs(), c))
    };
    let (d_lo, c_lo) = candidate(lo)?;
    let (d_hi, c_hi) = candidate(hi)?;
    // Tie or hi strictly closer -> larger index wins.
    Ok(if d_hi <= d_lo { c_hi } else { c_lo })
}

/// Quarter of the lattice spacing 4/N: the half-width used when deciding
/// whether an empirically measured cosine "sits on" the lattice. Narrow
/// enough that distinct rings never both qualify, wide enough to absorb the
/// floating-point noise of dot products.
pub fn membership_tolerance(lattice_size: u32) -> f64 {
    1.0 / f64::from(lattice_size)
}

/// Discrete phase 2πl/N with l ∈ {0, …, N}. l = 0 and l = N both denote the
/// zero phase (a full cyclic shift is the identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseIndex {
    l: u32,
    lattice_size: u32,
}

impl PhaseIndex {
    pub fn new(l: u32, lattice_size: u32) -> Result<Self> {
        validate_lattice_size(lattice_size)?;
        if l > lattice_size {
            return Err(Error::Parameter {
                name: "phase_index",
                reason: format!("l = {l} exceeds lattice size {lattice_size}"),
            });
        }
        Ok(Self { l, lattice_size })
    }

    pub fn zero(lattice_size: u32) -> Result<Self> {
        Self::new(0, lattice_size)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn lattice_size(&self) -> u32 {
        self.lattice_size
    }

    /// Phase angle 2πl/N in radians.
    pub fn angle(&self) -> f64 {
        2.0 * std::f64::consts::PI * f64::from(self.l) / f64::from(self.lattice_size)
    }
}

pub(crate) fn validate_lattice_size(lattice_size: u32) -> Result<()> {
    if lattice_size < 4 || !lattice_size.is_multiple_of(2) {
        return Err(Error::Parameter {
            name: "lattice_size",
            reason: format!("must be even and >= 4, got {lattice_size}"),
        });
    }
    Ok(())
}

fn validate_index(lattice_size: u32, index: u32) -> Result<()> {
    if index == 0 || index > lattice_size / 2 {
        return Err(Error::Parameter {
            name: "lattice_index",
            reason: format!(
                "n must lie in 1..={}, got {index} (lattice size {lattice_size})",
                lattice_size / 2
            ),
        });
    }
    Ok(())
}
