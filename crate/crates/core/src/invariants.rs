//! Equivalence invariants: the Haagerup phase set and the defect.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::equivalence::dephase;
use crate::error::Result;
use crate::linalg::{integer_rank, numeric_rank};
use crate::matrix::HadamardMatrix;
use crate::phase::RationalPhase;

/// Phases of all quartic products `h_ij h_kl conj(h_kj) conj(h_il)`.
/// Invariant under equivalence operations and under transposition.
pub fn haagerup_set(h: &HadamardMatrix) -> BTreeSet<RationalPhase> {
    let n = h.order();
    let mut set = BTreeSet::new();
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    set.insert(h.phase(i, j) + h.phase(k, l) - h.phase(k, j) - h.phase(i, l));
                }
            }
        }
    }
    set
}

/// Outcome of comparing two Haagerup sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LambdaVerdict {
    /// The sets differ, so the matrices are inequivalent. `witness` is the
    /// smallest phase in the symmetric difference; `in_first` tells which
    /// matrix's set contains it.
    Inequivalent {
        witness: RationalPhase,
        in_first: bool,
    },
    /// Equal sets prove nothing either way.
    Inconclusive,
}

pub fn lambda_distinguish(a: &HadamardMatrix, b: &HadamardMatrix) -> LambdaVerdict {
    let la = haagerup_set(a);
    let lb = haagerup_set(b);
    let witness = la.symmetric_difference(&lb).min();
    match witness {
        Some(&w) => LambdaVerdict::Inequivalent {
            witness: w,
            in_first: la.contains(&w),
        },
        None => LambdaVerdict::Inconclusive,
    }
}

/// The defect diagnostic: dimensions of the first-order unitarity system
/// around a dephased Hadamard matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefectReport {
    pub order: usize,
    /// Free entries of the perturbation matrix (first row and column pinned).
    pub unknowns: usize,
    /// Real linear equations (two per row pair).
    pub equations: usize,
    pub rank: usize,
    pub defect: usize,
    /// Whether the rank came from exact integer elimination.
    pub exact: bool,
}

/// Computes the defect: the nullity of the system
/// `sum_k H_ik conj(H_jk) (R_ik - R_jk) = 0` over all row pairs, where `R`
/// is a real perturbation with fixed (zero) first row and column. The input
/// must be Hadamard; it is dephased internally first.
///
/// For matrices with entries in `{1, -1, i, -i}` the system is integral and
/// the rank is exact; otherwise the rank is floating with a relative
/// singular-value cutoff of `1e-8`.
pub fn defect(h: &HadamardMatrix) -> Result<DefectReport> {
    h.verify_hadamard()?;
    let d = if h.is_dephased() {
        h.clone()
    } else {
        dephase(h).0
    };
    let n = d.order();
    let m = n - 1;
    let unknowns = m * m;
    let idx = |i: usize, k: usize| (i - 1) * m + (k - 1);

    // One pair of real rows per (i, j); entry coefficients are
    // cos/sin of the phase difference.
    let mut rows_re_im: Vec<(Vec<RationalPhase>, Vec<usize>, Vec<usize>)> = Vec::new();
    // Stored as (phase diffs per k, plus-columns, minus-columns) to share
    // between the exact and floating paths.
    for i in 0..n {
        for j in i + 1..n {
            let mut phases = Vec::with_capacity(n - 1);
            let mut plus = Vec::with_capacity(n - 1);
            let mut minus = Vec::with_capacity(n - 1);
            for k in 1..n {
                phases.push(d.phase(i, k) - d.phase(j, k));
                plus.push(if i >= 1 { idx(i, k) } else { usize::MAX });
                minus.push(idx(j, k));
            }
            rows_re_im.push((phases, plus, minus));
        }
    }
    let equations = 2 * rows_re_im.len();

    let exact = d.is_quarter_phase();
    let rank = if exact {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(equations);
        for (phases, plus, minus) in &rows_re_im {
            let mut re = vec![BigInt::from(0); unknowns];
            let mut im = vec![BigInt::from(0); unknowns];
            for (t, &q) in phases.iter().enumerate() {
                // Quarter phases have integral cos/sin.
                let (c, s) = match (q.numer(), q.denom()) {
                    (0, _) => (1, 0),
                    (1, 2) => (-1, 0),
                    (1, 4) => (0, 1),
                    (3, 4) => (0, -1),
                    _ => unreachable!("checked quarter-phase"),
                };
                for (sign, cols) in [(1, plus), (-1, minus)] {
                    let col = cols[t];
                    if col != usize::MAX {
                        re[col] += sign * c;
                        im[col] += sign * s;
                    }
                }
            }
            rows.push(re);
            rows.push(im);
        }
        integer_rank(rows)
    } else {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(equations);
        for (phases, plus, minus) in &rows_re_im {
            let mut re = vec![0.0; unknowns];
            let mut im = vec![0.0; unknowns];
            for (t, &q) in phases.iter().enumerate() {
                let v = q.to_complex();
                for (sign, cols) in [(1.0, plus), (-1.0, minus)] {
                    let col = cols[t];
                    if col != usize::MAX {
                        re[col] += sign * v.re;
                        im[col] += sign * v.im;
                    }
                }
            }
            rows.push(re);
            rows.push(im);
        }
        numeric_rank(&rows, 1e-8)
    };

    Ok(DefectReport {
        order: n,
        unknowns,
        equations,
        rank,
        defect: unknowns - rank,
        exact,
    })
}
