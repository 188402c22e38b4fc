//! Exact classification of cos(pπ/q).
//!
//! A classical result in algebraic number theory says the only rational
//! values cos can take at rational multiples of π are 0, ±1/2 and ±1.
//! Which one (if any) applies is decided by pure integer reduction:
//! write pπ/q = 2π·a/b in lowest terms; then cos is rational iff
//! b ∈ {1, 2, 3, 4, 6}, because 2·cos(2πa/b) is an algebraic integer of
//! degree φ(b)/2 and rationality forces φ(b) ≤ 2. The five surviving
//! denominators give, respectively, 1, −1, −1/2, 0 and 1/2 (a is coprime to
//! b, which fixes the value independent of a).

use crate::{Error, Result};

/// Exact value of cos(pπ/q) when it is rational, as a reduced fraction
/// (numerator, denominator); `None` when the value is irrational.
pub fn cos_rational_class(p: i64, q: i64) -> Result<Option<(i64, i64)>> {
    if q == 0 {
        return Err(Error::Domain("cos(pπ/q) needs q != 0".into()));
    }
    // cos((−p)π/(−q)) = cos(pπ/q): normalize the denominator sign.
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    let two_q = (q as i128) * 2;
    let g = gcd_i128(p.unsigned_abs() as i128, two_q);
    let b = two_q / g;
    Ok(match b {
        1 => Some((1, 1)),
        2 => Some((-1, 1)),
        3 => Some((-1, 2)),
        4 => Some((0, 1)),
        6 => Some((1, 2)),
        _ => None,
    })
}

/// True iff cos(pπ/q) ∈ {0, ±1/2, ±1}, i.e. iff it is rational at all.
pub fn cos_is_rational(p: i64, q: i64) -> Result<bool> {
    Ok(cos_rational_class(p, q)?.is_some())
}

/// Best rational approximation p/q to `x` with q ≤ `max_den`, found by
/// walking the continued-fraction convergents (with the final semiconvergent
/// considered). Returns (p, q, |x − p/q|). Used as a diagnostic probe for
/// "is this angle a low-order rational multiple of 2π" questions; it makes
/// no exactness claim on its own.
pub fn nearest_rational_angle(x: f64, max_den: u64) -> (i64, u64, f64) {
    assert!(max_den >= 1, "max_den must be positive");
    if !x.is_finite() {
        return (0, 1, f64::INFINITY);
    }
    // Convergents p_k/q_k of the continued fraction of x.
    let (mut p_prev, mut q_prev): (i128, i128) = (1, 0);
    let (mut p_cur, mut q_cur): (i128, i128) = (x.floor() as i128, 1);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a >= 1e18 {
            break;
        }
        let a_int = a as i128;
        let p_next = a_int * p_cur + p_prev;
        let q_next = a_int * q_cur + q_prev;
        if q_next > max_den as i128 {
            // Best semiconvergent with denominator still in range.
            let t = (max_den as i128 - q_prev) / q_cur;
            if t >= 1 {
                let p_semi = t * p_cur + p_prev;
                let q_semi = t * q_cur + q_prev;
                let err_semi = (x - p_semi as f64 / q_semi as f64).abs();
                let err_cur = (x - p_cur as f64 / q_cur as f64).abs();
                if err_semi < err_cur {
                    return (p_semi as i64, q_semi as u64, err_semi);
                }
            }
            break;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        frac = inv - a;
    }
    let err = (x - p_cur as f64 / q_cur as f64).abs();
    (p_cur as i64, q_cur as u64, err)
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}
