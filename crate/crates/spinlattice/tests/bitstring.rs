//! Outcome-string layer: block layouts, counting identities, phases,
//! trajectory selection and the compact fixture serialization.
//!
//! Expected strings for small lattices are frozen from hand enumeration of
//! the layouts; exact-correlation identities are cross-checked by counting
//! materialized entries against the closed form.

use std::str::FromStr;

use proptest::prelude::*;
use spinlattice::bitstring::{
    correlation_exact, pair_outcomes_at, single_outcome_at, BitStringPair, BitStringSingle,
    TrajectoryIndex,
};
use spinlattice::geometry::{PhaseIndex, RationalCosine};

fn single(n_lattice: u32, n: u32, l: u32) -> BitStringSingle {
    let cosine = RationalCosine::single(n_lattice, n).unwrap();
    let phase = PhaseIndex::new(l, n_lattice).unwrap();
    BitStringSingle::build(&cosine, phase).unwrap()
}

fn pair(n_lattice: u32, n: u32) -> BitStringPair {
    let cosine = RationalCosine::bell(n_lattice, n).unwrap();
    BitStringPair::build(&cosine).unwrap()
}

#[test]
fn single_strings_match_hand_enumeration() {
    assert_eq!(single(8, 1, 0).entries(), [1, 1, 1, 1, 1, 1, 1, -1]);
    assert_eq!(single(4, 2, 0).entries(), [1, -1, -1, -1]);
    // right cyclic shift by one: the tail −1 wraps to the front
    assert_eq!(single(8, 1, 1).entries(), [-1, 1, 1, 1, 1, 1, 1, 1]);
    // full shift is the identity
    assert_eq!(single(8, 3, 8).entries(), single(8, 3, 0).entries());
}

#[test]
fn single_mean_equals_cosine_exactly() {
    for n_lattice in [4u32, 6, 8, 10, 64, 1024] {
        for n in 1..=n_lattice / 2 {
            let s = single(n_lattice, n, 0);
            let (sum, den) = s.mean_exact();
            assert_eq!(sum, s.cosine().numerator());
            assert_eq!(den, s.cosine().denominator());
            // composition identities: N·sin²(θ/2) = 2n−1 of "−",
            // N·cos²(θ/2) = N − (2n−1) of "+"
            let minus = s.entries().iter().filter(|&&e| e < 0).count() as i64;
            assert_eq!(minus, 2 * i64::from(n) - 1);
        }
    }
}

#[test]
fn single_outcome_reads_the_selected_column() {
    let s = single(8, 1, 0);
    let k8 = TrajectoryIndex::new(8, 8).unwrap();
    assert_eq!(s.outcome(k8).unwrap(), -1);
    let k1 = TrajectoryIndex::new(1, 8).unwrap();
    assert_eq!(s.outcome(k1).unwrap(), 1);
    // mismatched lattice sizes are refused
    let wrong = TrajectoryIndex::new(1, 4).unwrap();
    assert!(s.outcome(wrong).is_err());
}

#[test]
fn trajectory_index_validation() {
    assert!(TrajectoryIndex::new(0, 8).is_err());
    assert!(TrajectoryIndex::new(9, 8).is_err());
    assert!(TrajectoryIndex::new(8, 8).is_ok());
}

proptest! {
    /// Phase shifts permute entries without changing the composition, and
    /// shifting by l then reading column k equals reading the canonical
    /// string at the unshifted position.
    #[test]
    fn phase_shift_is_a_cyclic_permutation(half in 2u32..64, n_seed in 1u32..1000, l_seed in 0u32..1000) {
        let n_lattice = 2 * half;
        let n = 1 + n_seed % half;
        let l = l_seed % (n_lattice + 1);
        let canonical = single(n_lattice, n, 0);
        let shifted = single(n_lattice, n, l);
        let (sum_c, _) = canonical.mean_exact();
        let (sum_s, _) = shifted.mean_exact();
        prop_assert_eq!(sum_c, sum_s);
        for k in 1..=n_lattice {
            let idx = (k as usize - 1 + n_lattice as usize - l as usize % n_lattice as usize)
                % n_lattice as usize;
            prop_assert_eq!(
                shifted.entries()[k as usize - 1],
                canonical.entries()[idx]
            );
        }
    }

    /// The outcome at column k depends on nothing but that column: any two
    /// strings agreeing at k give the same outcome there, however much the
    /// rest differs.
    #[test]
    fn outcome_ignores_other_columns(half in 2u32..64, a_seed in 1u32..1000, b_seed in 1u32..1000, k_seed in 0u32..1000) {
        let n_lattice = 2 * half;
        let a = single(n_lattice, 1 + a_seed % half, 0);
        let b = single(n_lattice, 1 + b_seed % half, 0);
        let k = 1 + k_seed % n_lattice;
        let kk = TrajectoryIndex::new(k, n_lattice).unwrap();
        if a.entries()[k as usize - 1] == b.entries()[k as usize - 1] {
            prop_assert_eq!(a.outcome(kk).unwrap(), b.outcome(kk).unwrap());
        }
    }
}

#[test]
fn pair_rows_match_hand_enumeration() {
    let p = pair(8, 2);
    assert_eq!(p.row(0), [1, 1, 1, 1, -1, -1, -1, -1]);
    assert_eq!(p.row(1), [1, 1, -1, -1, -1, -1, 1, 1]);
    // n = N/2 collapses row 2 onto row 1 (perfect correlation)
    let collapsed = pair(4, 2);
    assert_eq!(collapsed.row(0), collapsed.row(1));
}

#[test]
fn pair_outcomes_read_columns() {
    let p = pair(8, 2);
    let k1 = TrajectoryIndex::new(1, 8).unwrap();
    assert_eq!(p.outcomes(k1).unwrap(), (1, 1));
    let k3 = TrajectoryIndex::new(3, 8).unwrap();
    assert_eq!(p.outcomes(k3).unwrap(), (1, -1));
}

#[test]
fn pair_counting_identities() {
    for n_lattice in [4u32, 6, 8, 10, 64, 256] {
        let half = n_lattice / 2;
        for n in 1..=half {
            let p = pair(n_lattice, n);
            let mut counts = [[0i64; 2]; 2]; // [row1 sign][row2 sign]
            for (a, b) in p.row(0).iter().zip(p.row(1)) {
                counts[usize::from(*a < 0)][usize::from(*b < 0)] += 1;
            }
            // n each of (+,+) and (−,−); N/2 − n each mixed
            assert_eq!(counts[0][0], i64::from(n));
            assert_eq!(counts[1][1], i64::from(n));
            assert_eq!(counts[0][1], i64::from(half - n));
            assert_eq!(counts[1][0], i64::from(half - n));

            // counted correlation equals the closed form (4n − N)/N, which is
            // exactly the negated cosine
            let (sum, den) = p.correlation_exact();
            let (cf_num, cf_den) = correlation_exact(p.cosine()).unwrap();
            assert_eq!((sum, den), (cf_num, cf_den));
            assert_eq!(sum, -p.cosine().numerator());

            // both marginals balanced to exactly zero
            for (row_sum, _) in p.row_means_exact() {
                assert_eq!(row_sum, 0);
            }
        }
    }
}

#[test]
fn pair_correlation_frozen_cases() {
    // n = N/2: correlation +1
    let (num, den) = correlation_exact(pair(8, 4).cosine()).unwrap();
    assert_eq!((num, den), (8, 8));
    // N=8, n=2: correlation 0
    assert_eq!(correlation_exact(pair(8, 2).cosine()).unwrap().0, 0);
    // N=8, n=1: correlation −1/2
    assert_eq!(correlation_exact(pair(8, 1).cosine()).unwrap(), (-4, 8));
}

#[test]
fn kind_mismatches_are_refused() {
    let bell = RationalCosine::bell(8, 2).unwrap();
    let phase = PhaseIndex::zero(8).unwrap();
    assert!(BitStringSingle::build(&bell, phase).is_err());
    let single_cos = RationalCosine::single(8, 2).unwrap();
    assert!(BitStringPair::build(&single_cos).is_err());
    assert!(correlation_exact(&single_cos).is_err());
}

#[test]
fn compact_text_round_trips() {
    let s = single(8, 2, 3);
    assert_eq!(s.to_string().len(), 8);
    let parsed = BitStringSingle::from_str(&s.to_string()).unwrap();
    assert_eq!(parsed, s);

    let p = pair(8, 3);
    let parsed_pair = BitStringPair::from_str(&p.to_string()).unwrap();
    assert_eq!(parsed_pair, p);

    assert_eq!(single(8, 1, 0).to_string(), "+++++++-");
    assert_eq!(pair(8, 2).to_string(), "++++----|++----++");

    assert!(BitStringSingle::from_str("++x-").is_err());
    // even minus count cannot come from a single-particle cosine
    assert!(BitStringSingle::from_str("++--").is_err());
}

proptest! {
    #[test]
    fn compact_text_round_trip_property(half in 2u32..64, n_seed in 1u32..1000, l_seed in 0u32..1000) {
        let n_lattice = 2 * half;
        let s = single(n_lattice, 1 + n_seed % half, l_seed % (n_lattice + 1));
        prop_assert_eq!(BitStringSingle::from_str(&s.to_string()).unwrap(), s);
        let p = pair(n_lattice, 1 + n_seed % half);
        prop_assert_eq!(BitStringPair::from_str(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn direct_column_reads_match_materialized_strings() {
    // The allocation-free column reads must agree with the built strings for
    // every (lattice, ring, phase, column) combination in a broad sweep.
    for n_lattice in [4u32, 8, 10, 16, 64] {
        for n in 1..=n_lattice / 2 {
            let single_cos = RationalCosine::single(n_lattice, n).unwrap();
            let pair_cos = RationalCosine::bell(n_lattice, n).unwrap();
            let pair_string = BitStringPair::build(&pair_cos).unwrap();
            for l in [0u32, 1, 3, n_lattice / 2, n_lattice] {
                let phase = PhaseIndex::new(l, n_lattice).unwrap();
                let built = BitStringSingle::build(&single_cos, phase).unwrap();
                for k in 1..=n_lattice {
                    let k = TrajectoryIndex::new(k, n_lattice).unwrap();
                    assert_eq!(
                        single_outcome_at(&single_cos, phase, k).unwrap(),
                        built.outcome(k).unwrap(),
                        "single N={n_lattice} n={n} l={l} k={}",
                        k.k()
                    );
                }
            }
            for k in 1..=n_lattice {
                let k = TrajectoryIndex::new(k, n_lattice).unwrap();
                assert_eq!(
                    pair_outcomes_at(&pair_cos, k).unwrap(),
                    pair_string.outcomes(k).unwrap(),
                    "pair N={n_lattice} n={n} k={}",
                    k.k()
                );
            }
        }
    }
}

#[test]
fn direct_column_reads_validate_their_inputs() {
    let single_cos = RationalCosine::single(8, 1).unwrap();
    let pair_cos = RationalCosine::bell(8, 1).unwrap();
    let phase8 = PhaseIndex::zero(8).unwrap();
    let k8 = TrajectoryIndex::new(1, 8).unwrap();
    let k16 = TrajectoryIndex::new(1, 16).unwrap();
    assert!(single_outcome_at(&pair_cos, phase8, k8).is_err());
    assert!(single_outcome_at(&single_cos, phase8, k16).is_err());
    assert!(pair_outcomes_at(&single_cos, k8).is_err());
    assert!(pair_outcomes_at(&pair_cos, k16).is_err());
}
