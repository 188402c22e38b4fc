//! Exact ±1 outcome strings.
//!
//! Every admissible cosine fixes a finite string of ±1 outcomes whose
//! composition encodes it exactly:
//!
//! * single-particle, cosine 1 − (2n−1)/(N/2): N entries of which 2n−1 are
//!   −1, so the mean is the cosine itself. The canonical order puts the +1
//!   block first; the discrete phase 2πl/N enters as a right cyclic shift
//!   by l.
//! * singlet pair, cosine 1 − 4n/N: two rows of N entries. Row 1 is N/2 "+"
//!   then N/2 "−"; row 2 is [n "+", (N/2−n) "−", n "−", (N/2−n) "+"]. Column
//!   counts follow: n columns each of (+,+) and (−,−), N/2−n each of (+,−)
//!   and (−,+), so the exact product mean is (4n−N)/N = −(1 − 4n/N) and both
//!   row means vanish.
//!
//! A run reads one column, selected by the trajectory index k (uniform on
//! {1..N}), which is part of the hidden state.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{LatticeKind, PhaseIndex, RationalCosine};
use crate::{Error, Result};

/// Column selector k ∈ {1, …, N} (1-indexed, matching the counting
/// identities the strings encode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryIndex {
    k: u32,
    lattice_size: u32,
}

impl TrajectoryIndex {
    pub fn new(k: u32, lattice_size: u32) -> Result<Self> {
        if k == 0 || k > lattice_size {
            return Err(Error::Parameter {
                name: "trajectory_index",
                reason: format!("k must lie in 1..={lattice_size}, got {k}"),
            });
        }
        Ok(Self { k, lattice_size })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lattice_size(&self) -> u32 {
        self.lattice_size
    }

    fn check_string(&self, lattice_size: u32) -> Result<usize> {
        if self.lattice_size != lattice_size {
            return Err(Error::Domain(format!(
                "trajectory index for lattice size {} used on string of size {}",
                self.lattice_size, lattice_size
            )));
        }
        Ok(self.k as usize - 1)
    }
}

/// Single-particle outcome string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStringSingle {
    cosine: RationalCosine,
    phase: PhaseIndex,
    entries: Vec<i8>,
}

impl BitStringSingle {
    /// Build the string for a single-particle cosine and phase shift l.
    pub fn build(cosine: &RationalCosine, phase: PhaseIndex) -> Result<Self> {
        if cosine.kind() != LatticeKind::Single {
            return Err(Error::Domain(
                "single-particle bit string needs a single-kind cosine".into(),
            ));
        }
        let n_total = cosine.lattice_size();
        if phase.lattice_size() != n_total {
            return Err(Error::Domain(format!(
                "phase index over lattice size {} does not match cosine over {}",
                phase.lattice_size(),
                n_total
            )));
        }
        let minus = cosine.constraint_integer() as usize; // 2n−1
        let total = n_total as usize;
        let shift = (phase.l() as usize) % total;
        // l = N is the identity shift; store it canonically as l = 0 so that
        // equal strings compare equal.
        let phase = PhaseIndex::new(shift as u32, n_total)?;
        let mut entries = vec![1i8; total];
        // canonical minus-block occupies the tail; a right shift by l moves
        // position i to (i + l) mod N
        for i in (total - minus)..total {
            entries[(i + shift) % total] = -1;
        }
        Ok(Self { cosine: *cosine, phase, entries })
    }

    pub fn cosine(&self) -> &RationalCosine {
        &self.cosine
    }

    pub fn phase(&self) -> PhaseIndex {
        self.phase
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Outcome of the k-th column.
    pub fn outcome(&self, k: TrajectoryIndex) -> Result<i8> {
        let idx = k.check_string(self.cosine.lattice_size())?;
        Ok(self.entries[idx])
    }

    /// Exact mean as (sum of entries, N), counted from the stored entries —
    /// not from the formula, so tests can pit one against the other.
    pub fn mean_exact(&self) -> (i64, i64) {
        let sum: i64 = self.entries.iter().map(|&e| i64::from(e)).sum();
        (sum, i64::from(self.cosine.lattice_size()))
    }
}

impl fmt::Display for BitStringSingle {
    /// Compact fixture form, e.g. "+++++++-".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.entries {
            f.write_str(if e > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for BitStringSingle {
    type Err = Error;

    /// Parse the compact ± form, recovering (N, n, l) from the block
    /// structure. The minus count must be odd (it always is for genuine
    /// single-particle strings) and the string must be a cyclic shift of the
    /// canonical block layout.
    fn from_str(s: &str) -> Result<Self> {
        let entries = parse_signs(s)?;
        let total = entries.len();
        let minus = entries.iter().filter(|&&e| e < 0).count();
        if minus % 2 == 0 || minus == 0 {
            return Err(Error::Domain(format!(
                "minus count {minus} is not an odd positive integer"
            )));
        }
        let lattice_size = u32::try_from(total)
            .map_err(|_| Error::Domain("string too long".into()))?;
        let index = ((minus + 1) as u32).div_ceil(2);
        let cosine = RationalCosine::single(lattice_size, index)?;
        // locate the canonical minus-block start: the unique '-' preceded
        // (cyclically) by '+'
        let start = (0..total)
            .find(|&i| entries[i] < 0 && entries[(i + total - 1) % total] > 0)
            .ok_or_else(|| Error::Domain("entries are not a single block".into()))?;
        let l = ((start + minus) % total) as u32;
        let phase = PhaseIndex::new(l, lattice_size)?;
        let rebuilt = BitStringSingle::build(&cosine, phase)?;
        if rebuilt.entries != entries {
            return Err(Error::Domain(
                "entries are not a cyclic shift of a block string".into(),
            ));
        }
        Ok(rebuilt)
    }
}

/// Two-row outcome string for a singlet pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStringPair {
    cosine: RationalCosine,
    rows: [Vec<i8>; 2],
}

impl BitStringPair {
    /// Build both rows for a pair cosine.
    pub fn build(cosine: &RationalCosine) -> Result<Self> {
        if cosine.kind() != LatticeKind::Bell {
            return Err(Error::Domain(
                "pair bit string needs a pair-kind cosine".into(),
            ));
        }
        let total = cosine.lattice_size() as usize;
        let half = total / 2;
        let n = cosine.index() as usize;
        let mut row1 = vec![1i8; total];
        for e in row1.iter_mut().skip(half) {
            *e = -1;
        }
        let mut row2 = vec![1i8; total];
        // [n "+", half−n "−", n "−", half−n "+"]
        for e in row2.iter_mut().take(half).skip(n) {
            *e = -1;
        }
        for e in row2.iter_mut().take(half + n).skip(half) {
            *e = -1;
        }
        Ok(Self { cosine: *cosine, rows: [row1, row2] })
    }

    pub fn cosine(&self) -> &RationalCosine {
        &self.cosine
    }

    pub fn row(&self, which: usize) -> &[i8] {
        &self.rows[which]
    }

    /// Outcomes of the k-th column: (first wing, second wing).
    pub fn outcomes(&self, k: TrajectoryIndex) -> Result<(i8, i8)> {
        let idx = k.check_string(self.cosine.lattice_size())?;
        Ok((self.rows[0][idx], self.rows[1][idx]))
    }

    /// Exact column-product mean as (Σ row1·row2, N), counted from entries.
    pub fn correlation_exact(&self) -> (i64, i64) {
        let sum: i64 = self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(&a, &b)| i64::from(a) * i64::from(b))
            .sum();
        (sum, i64::from(self.cosine.lattice_size()))
    }

    /// Row means as exact fractions; both are balanced to exactly 0.
    pub fn row_means_exact(&self) -> [(i64, i64); 2] {
        let mean = |row: &[i8]| {
            (
                row.iter().map(|&e| i64::from(e)).sum::<i64>(),
                i64::from(self.cosine.lattice_size()),
            )
        };
        [mean(&self.rows[0]), mean(&self.rows[1])]
    }
}

impl fmt::Display for BitStringPair {
    /// Compact fixture form: both rows joined by '|'.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for &e in row {
                f.write_str(if e > 0 { "+" } else { "-" })?;
            }
        }
        Ok(())
    }
}

impl FromStr for BitStringPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r1, r2) = s
            .split_once('|')
            .ok_or_else(|| Error::Domain("pair string needs two '|'-separated rows".into()))?;
        let row1 = parse_signs(r1)?;
        let row2 = parse_signs(r2)?;
        if row1.len() != row2.len() {
            return Err(Error::Domain("rows differ in length".into()));
        }
        let lattice_size = u32::try_from(row1.len())
            .map_err(|_| Error::Domain("string too long".into()))?;
        // recover n as the (+,+) column count
        let n = row1
            .iter()
            .zip(&row2)
            .filter(|(&a, &b)| a > 0 && b > 0)
            .count() as u32;
        let cosine = RationalCosine::bell(lattice_size, n)?;
        let rebuilt = BitStringPair::build(&cosine)?;
        if rebuilt.rows[0] != row1 || rebuilt.rows[1] != row2 {
            return Err(Error::Domain("rows do not match the pair layout".into()));
        }
        Ok(rebuilt)
    }
}

/// Column k of a single-particle string, computed from the block layout
/// without materializing entries — the hot path for large lattices. Must
/// agree with `BitStringSingle::build(..).outcome(k)` everywhere (tested).
pub fn single_outcome_at(
    cosine: &RationalCosine,
    phase: PhaseIndex,
    k: TrajectoryIndex,
) -> Result<i8> {
    if cosine.kind() != LatticeKind::Single {
        return Err(Error::Domain(
            "single-particle bit string needs a single-kind cosine".into(),
        ));
    }
    let n_total = cosine.lattice_size();
    if phase.lattice_size() != n_total || k.lattice_size() != n_total {
        return Err(Error::Domain(
            "phase or trajectory index lattice size does not match the cosine".into(),
        ));
    }
    let total = n_total as usize;
    let minus = cosine.constraint_integer() as usize; // 2n−1
    let shift = (phase.l() as usize) % total;
    let idx = (k.k() as usize - 1 + total - shift) % total; // undo the right shift
    Ok(if idx >= total - minus { -1 } else { 1 })
}

/// Column k of both rows of a pair string, from the layout directly.
pub fn pair_outcomes_at(cosine: &RationalCosine, k: TrajectoryIndex) -> Result<(i8, i8)> {
    if cosine.kind() != LatticeKind::Bell {
        return Err(Error::Domain(
            "pair bit string needs a pair-kind cosine".into(),
        ));
    }
    if k.lattice_size() != cosine.lattice_size() {
        return Err(Error::Domain(
            "trajectory index lattice size does not match the cosine".into(),
        ));
    }
    let half = cosine.lattice_size() as usize / 2;
    let n = cosine.index() as usize;
    let idx = k.k() as usize - 1;
    let first = if idx < half { 1 } else { -1 };
    // row 2 layout: [n "+", half−n "−", n "−", half−n "+"]
    let second = if idx < n {
        1
    } else if idx < half + n {
        -1
    } else {
        1
    };
    Ok((first, second))
}

/// Closed-form exact column-product mean for a pair cosine: (4n − N, N),
/// i.e. exactly −(1 − 4n/N). `BitStringPair::correlation_exact` counts the
/// same quantity from materialized entries.
pub fn correlation_exact(cosine: &RationalCosine) -> Result<(i64, i64)> {
    if cosine.kind() != LatticeKind::Bell {
        return Err(Error::Domain(
            "exact correlation is defined for pair-kind cosines".into(),
        ));
    }
    let n_total = i64::from(cosine.lattice_size());
    Ok((4 * i64::from(cosine.index()) - n_total, n_total))
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(Error::Domain(format!("invalid sign character '{other}'"))),
        })
        .collect()
}
