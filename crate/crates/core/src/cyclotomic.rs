//! Exact test for vanishing sums of roots of unity.
//!
//! A sum `sum_k exp(2*pi*i*q_k)` with rational `q_k` is zero exactly when the
//! corresponding polynomial in `x = exp(2*pi*i/L)` (with `L` the lcm of the
//! denominators) is divisible by the `L`-th cyclotomic polynomial. Reduction
//! happens over the integers, so the verdict carries no rounding error. When
//! `L` exceeds the practical bound the check falls back to floating point.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::phase::RationalPhase;

/// Largest root-of-unity order handled exactly. Beyond this the check is
/// numeric with tolerance `NUMERIC_TOL`.
pub const DEFAULT_ORDER_BOUND: u64 = 360;

pub const NUMERIC_TOL: f64 = 1e-9;

/// Whether `sum_k exp(2*pi*i*q_k) = 0`, exactly when the common denominator
/// is at most `DEFAULT_ORDER_BOUND`.
pub fn vanishing_root_sum(phases: &[RationalPhase]) -> bool {
    vanishing_root_sum_bounded(phases, DEFAULT_ORDER_BOUND)
}

pub fn vanishing_root_sum_bounded(phases: &[RationalPhase], bound: u64) -> bool {
    if phases.is_empty() {
        return true;
    }
    match common_order(phases, bound) {
        Some(l) => vanishes_exact(phases, l),
        None => numeric_sum_norm(phases) < NUMERIC_TOL,
    }
}

/// lcm of the phase denominators, if it stays within `bound`.
fn common_order(phases: &[RationalPhase], bound: u64) -> Option<u64> {
    let mut l: u64 = 1;
    for p in phases {
        let d = p.denom() as u64;
        l = num_integer::lcm(l, d);
        if l > bound {
            return None;
        }
    }
    Some(l)
}

fn numeric_sum_norm(phases: &[RationalPhase]) -> f64 {
    phases
        .iter()
        .map(|p| p.to_complex())
        .sum::<num_complex::Complex64>()
        .norm()
}

fn vanishes_exact(phases: &[RationalPhase], l: u64) -> bool {
    // Multiplicity vector of exponents in Z[x] / representation by x^j,
    // j = q * L.
    let mut coeffs = vec![BigInt::zero(); l as usize];
    for p in phases {
        let j = p.numer() as u64 * (l / p.denom() as u64);
        coeffs[j as usize] += 1;
    }
    let phi = cyclotomic(l);
    poly_rem_is_zero(coeffs, &phi)
}

/// Coefficients of the `n`-th cyclotomic polynomial, low degree first.
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    let mut table: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for d in divisors(n) {
        // x^d - 1
        let mut poly = vec![BigInt::zero(); d as usize + 1];
        poly[0] = -BigInt::one();
        poly[d as usize] = BigInt::one();
        for (e, phi_e) in &table {
            if d % e == 0 {
                poly = poly_div_exact(poly, phi_e);
            }
        }
        if d == n {
            return poly;
        }
        table.push((d, poly));
    }
    unreachable!("n is its own largest divisor");
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    ds.sort_unstable();
    ds
}

/// Exact division by a monic polynomial; panics if the division leaves a
/// remainder (callers only divide by known factors).
fn poly_div_exact(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let nd = num.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = std::mem::take(&mut num[k + dd]);
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate().take(dd) {
                let sub = d * &c;
                num[k + i] -= sub;
            }
        }
        quot[k] = c;
    }
    assert!(num.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Whether `num` is divisible by the monic polynomial `den`.
fn poly_rem_is_zero(mut num: Vec<BigInt>, den: &[BigInt]) -> bool {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    if num.len() <= dd {
        return num.iter().all(|c| c.is_zero());
    }
    let nd = num.len() - 1;
    for k in (0..=nd - dd).rev() {
        let c = std::mem::take(&mut num[k + dd]);
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate().take(dd) {
                let sub = d * &c;
                num[k + i] -= sub;
            }
        }
    }
    num.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn q(n: i64, d: i64) -> RationalPhase {
        RationalPhase::new(n, d).unwrap()
    }

    /// Independent oracle: direct floating summation.
    fn numeric_oracle(phases: &[RationalPhase]) -> f64 {
        phases
            .iter()
            .map(|p| p.to_complex())
            .sum::<Complex64>()
            .norm()
    }

    #[test]
    fn cyclotomic_polynomials_match_known_forms() {
        let c = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic(1), c(&[-1, 1]));
        assert_eq!(cyclotomic(2), c(&[1, 1]));
        assert_eq!(cyclotomic(3), c(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), c(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), c(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), c(&[1, 0, -1, 0, 1]));
        // Degree is Euler's totient.
        assert_eq!(cyclotomic(360).len() - 1, 96);
    }

    #[test]
    fn simple_vanishing_sums() {
        assert!(vanishing_root_sum(&[q(0, 1), q(1, 2)]));
        assert!(vanishing_root_sum(&[q(0, 1), q(1, 3), q(2, 3)]));
        assert!(!vanishing_root_sum(&[q(0, 1), q(1, 4)]));
        assert!(!vanishing_root_sum(&[q(1, 3)]));
        assert!(vanishing_root_sum(&[]));
    }

    #[test]
    fn twelfth_root_sum_vanishes() {
        // Oracle first: 1/12 + 5/12 + 9/12 of a turn sum to zero numerically.
        let phases = [q(1, 12), q(5, 12), q(9, 12)];
        assert!(numeric_oracle(&phases) < 1e-12);
        assert!(vanishing_root_sum(&phases));
    }

    #[test]
    fn prime_order_sums() {
        let five: Vec<_> = (0..5).map(|k| q(k, 5)).collect();
        assert!(numeric_oracle(&five) < 1e-12);
        assert!(vanishing_root_sum(&five));
        // Any proper subsum of a prime-order orbit is nonzero.
        assert!(!vanishing_root_sum(&five[1..]));
        assert!(!vanishing_root_sum(&five[..4]));
    }

    #[test]
    fn union_of_vanishing_sums_vanishes() {
        let phases = [q(0, 1), q(1, 2), q(0, 1), q(1, 3), q(2, 3)];
        assert!(vanishing_root_sum(&phases));
        // Multiplicities matter: doubling one term breaks it.
        let phases = [q(0, 1), q(0, 1), q(1, 2)];
        assert!(!vanishing_root_sum(&phases));
    }

    #[test]
    fn falls_back_to_numeric_beyond_bound() {
        // Denominator 1009 is prime and above the bound, so this goes through
        // the floating-point path.
        let all: Vec<_> = (0..1009).map(|k| q(k, 1009)).collect();
        assert!(vanishing_root_sum(&all));
        assert!(!vanishing_root_sum(&[q(0, 1), q(1, 1009)]));
        // Forcing a tiny bound on an exactly-decidable sum still agrees.
        assert!(vanishing_root_sum_bounded(&[q(0, 1), q(1, 2)], 1));
    }

    #[test]
    fn exact_verdict_agrees_with_numeric_oracle() {
        // Exhaustive-ish sweep: subsets of 12th roots of unity.
        let roots: Vec<_> = (0..12).map(|k| q(k, 12)).collect();
        for mask in 0u32..(1 << 12) {
            let subset: Vec<_> = (0..12)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| roots[k as usize])
                .collect();
            let numeric = numeric_oracle(&subset) < 1e-9;
            assert_eq!(
                vanishing_root_sum(&subset),
                numeric,
                "disagreement on mask {mask:#014b}"
            );
        }
    }
}
