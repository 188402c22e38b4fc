use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::experiments::SnapReport;
use crate::geometry::{tangent_frame, Cap, LatticeKind, UnitVector};
use crate::ontology::{mechanism, ModelParams};
use crate::Result;

/// Largest lattice for which the distinct squared-sum values are stored.
const SQUARED_SUM_LIMIT: u32 = 32;
/// Largest lattice for which realizable pairs are stored individually.
const PAIR_LIST_LIMIT: u32 = 64;

/// Whether three mutually orthogonal directions can all have lattice-valued
/// cosines against a common reference, and how close the mechanism's outputs
/// for an orthogonal dial frame come to staying orthogonal.
///
/// For an orthonormal frame {X̂₁, X̂₂, X̂₃} the squared cosines against any
/// unit Â sum to exactly 1, so an all-on-lattice orthogonal triple requires
/// three allowed values r with r₁² + r₂² + r₃² = 1. The census solves that in
/// integer arithmetic, counts the weaker two-at-once condition
/// r₁² + r₂² ≤ 1, and Monte-Carlo samples the frame the mechanism actually
/// realizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityCensus {
    pub lattice_size: u32,
    /// Lattice index triples (n₁ ≤ n₂ ≤ n₃) whose values satisfy
    /// r₁² + r₂² + r₃² = 1 exactly. Empty for every even lattice size:
    /// each squared numerator is ≡ 4 (mod 16), so three of them sum to
    /// 12 (mod 16) while the required N² is ≡ 0 or 4 (mod 16).
    pub triples: Vec<(u32, u32, u32)>,
    /// Distinct values of r₁² + r₂² + r₃² over lattice triples, as reduced
    /// fractions, sorted ascending. Stored only for lattice sizes ≤ 32.
    pub squared_sums: Vec<(i64, i64)>,
    /// Number of index pairs (n₁ ≤ n₂) with r₁² + r₂² ≤ 1: two of the three
    /// orthogonal directions *can* simultaneously hold lattice values.
    pub realizable_pair_count: u64,
    /// The realizable pairs themselves. Stored only for lattice sizes ≤ 64.
    pub realizable_pairs: Vec<(u32, u32)>,
    /// Monte-Carlo trials of mechanism outputs for random orthonormal dials.
    pub trials: u64,
    /// Largest |X̂ᵢ·X̂ⱼ| seen when one exact rest state serves all three
    /// dials: the mechanism is then one rigid rotation, so orthogonality
    /// survives to rounding error.
    pub max_pairwise_dot_shared_rest: f64,
    /// Largest |X̂ᵢ·X̂ⱼ| seen when each dial gets its own exact rest state
    /// (three separate realizations of the same selected rest): orthogonality
    /// now breaks at the scale of the resolution bound.
    pub max_pairwise_dot_independent_rests: f64,
    /// Histogram over trials of how many of the three cosines Â·X̂ᵢ
    /// (independent rests) land within lattice tolerance: index = count of
    /// on-lattice cosines, 0 through 3.
    pub on_lattice_counts: [u64; 4],
}

/// Exhausts the integer lattice conditions and samples `trials` random
/// orthonormal dial frames through the mechanism, measuring deviations from
/// orthogonality and lattice membership of the cosines against `prep_exact`.
pub fn noncommutativity_census(
    params: &ModelParams,
    prep_exact: &UnitVector,
    trials: u64,
    rng: &mut impl Rng,
) -> Result<OrthogonalityCensus> {
    let n = params.lattice_size();
    let (triples, squared_sums, realizable_pair_count, realizable_pairs) = integer_census(n);

    let rest_dial = UnitVector::z_axis();
    let sphere = Cap::new(rest_dial, 2.0)?;
    let rest_cap = Cap::new(rest_dial, params.delta())?;

    let mut max_shared = 0.0f64;
    let mut max_independent = 0.0f64;
    let mut on_lattice_counts = [0u64; 4];
    for _ in 0..trials {
        // A uniformly random orthonormal frame: random first axis, random
        // rotation of the tangent pair about it.
        let x1 = sphere.sample_uniform(rng);
        let (e1, e2) = tangent_frame(&x1);
        let phi = std::f64::consts::TAU * rng.gen::<f64>();
        let x2 = UnitVector::combine(&[(phi.cos(), &e1), (phi.sin(), &e2)])?;
        let x3_raw = x1.cross(&x2);
        let frame = [x1, x2, UnitVector::new(x3_raw[0], x3_raw[1], x3_raw[2])?];

        let shared_rest = rest_cap.sample_uniform(rng);
        let mut shared_out = [rest_dial; 3];
        let mut independent_out = [rest_dial; 3];
        let mut members = 0usize;
        for i in 0..3 {
            shared_out[i] = mechanism(&shared_rest, &rest_dial, &frame[i])?;
            let own_rest = rest_cap.sample_uniform(rng);
            independent_out[i] = mechanism(&own_rest, &rest_dial, &frame[i])?;
            let snap = SnapReport::for_dot(
                prep_exact.dot(&independent_out[i]),
                n,
                LatticeKind::Single,
            )?;
            members += usize::from(snap.on_lattice);
        }
        on_lattice_counts[members] += 1;
        for i in 0..3 {
            for j in (i + 1)..3 {
                max_shared = max_shared.max(shared_out[i].dot(&shared_out[j]).abs());
                max_independent =
                    max_independent.max(independent_out[i].dot(&independent_out[j]).abs());
            }
        }
    }

    Ok(OrthogonalityCensus {
        lattice_size: n,
        triples,
        squared_sums,
        realizable_pair_count,
        realizable_pairs,
        trials,
        max_pairwise_dot_shared_rest: max_shared,
        max_pairwise_dot_independent_rests: max_independent,
        on_lattice_counts,
    })
}

/// Numerator of the n-th allowed cosine (over denominator N).
fn numerator(lattice_size: u32, index: u32) -> i64 {
    i64::from(lattice_size) - 4 * i64::from(index) + 2
}

/// Exact enumeration of the lattice conditions: full triples, their
/// squared-sum spectrum (small lattices), and two-at-once pairs.
#[allow(clippy::type_complexity)]
fn integer_census(
    lattice_size: u32,
) -> (Vec<(u32, u32, u32)>, Vec<(i64, i64)>, u64, Vec<(u32, u32)>) {
    let n = lattice_size;
    let half = n / 2;
    let n_sq = i64::from(n) * i64::from(n);

    let mut triples = Vec::new();
    let mut pair_count = 0u64;
    let mut pairs = Vec::new();
    for n1 in 1..=half {
        let a1 = numerator(n, n1);
        for n2 in n1..=half {
            let a2 = numerator(n, n2);
            let two_sum = a1 * a1 + a2 * a2;
            if two_sum <= n_sq {
                pair_count += 1;
                if n <= PAIR_LIST_LIMIT {
                    pairs.push((n1, n2));
                }
            }
            let rem = n_sq - two_sum;
            if rem < 0 {
                continue;
            }
            let root = (rem as u64).isqrt() as i64;
            if root * root != rem {
                continue;
            }
            // Solve numerator(n3) = ±root for an index no smaller than n2.
            for a3 in [root, -root] {
                let offset = i64::from(n) + 2 - a3;
                if offset % 4 == 0 {
                    let n3 = offset / 4;
                    if n3 >= i64::from(n2) && n3 <= i64::from(half) {
                        triples.push((n1, n2, n3 as u32));
                    }
                }
                if root == 0 {
                    break;
                }
            }
        }
    }

    let mut squared_sums = Vec::new();
    if n <= SQUARED_SUM_LIMIT {
        let mut squares: Vec<i64> = (1..=half).map(|i| numerator(n, i).pow(2)).collect();
        squares.sort_unstable();
        squares.dedup();
        let mut sums = std::collections::BTreeSet::new();
        for (i, s1) in squares.iter().enumerate() {
            for (j, s2) in squares.iter().enumerate().skip(i) {
                for s3 in squares.iter().skip(j) {
                    let g = gcd(s1 + s2 + s3, n_sq);
                    sums.insert(((s1 + s2 + s3) / g, n_sq / g));
                }
            }
        }
        squared_sums = sums
            .into_iter()
            .collect::<Vec<_>>();
        squared_sums.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    }

    (triples, squared_sums, pair_count, pairs)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}
