//! Affine parametrization through column pairs that agree or are opposite in
//! every row.
//!
//! When two columns of a dephased Hadamard matrix satisfy `u_i = v_i` or
//! `u_i = -v_i` rowwise, multiplying both entries of each opposite row by a
//! common free phase keeps every row inner product zero: the two columns
//! cancel against each other wherever the phase appears. A real Hadamard
//! matrix satisfies the condition for every column pair, and applying it to
//! the pairs (1,2), (3,4), ... simultaneously, plus one extra parameter tied
//! to the half/half sign split of the second row, yields an orbit with
//! N/2 + 1 independent directions.

use crate::equivalence::{dephase, dephase_family, EquivalenceOp};
use crate::error::{Error, Result};
use crate::linalg::integer_rank_i64;
use crate::matrix::{param_name, AffinePhaseMatrix, HadamardMatrix};
use crate::phase::RationalPhase;

/// A column pair in which every row is either equal or opposite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPattern {
    pub u: usize,
    pub v: usize,
    /// Rows where the entries at `u` and `v` are negatives of each other.
    pub opposite_rows: Vec<usize>,
    pub equal_rows: Vec<usize>,
}

/// All column pairs (u < v) whose rows split into equal and opposite ones.
pub fn find_pair_patterns(h: &HadamardMatrix) -> Vec<PairPattern> {
    let n = h.order();
    let mut found = Vec::new();
    for u in 0..n {
        'pair: for v in u + 1..n {
            let mut opposite_rows = Vec::new();
            let mut equal_rows = Vec::new();
            for i in 0..n {
                let diff = h.phase(i, u) - h.phase(i, v);
                if diff.is_zero() {
                    equal_rows.push(i);
                } else if diff == RationalPhase::HALF {
                    opposite_rows.push(i);
                } else {
                    continue 'pair;
                }
            }
            found.push(PairPattern {
                u,
                v,
                opposite_rows,
                equal_rows,
            });
        }
    }
    found
}

fn check_pattern(h: &HadamardMatrix, pattern: &PairPattern) -> Result<()> {
    let fresh = find_pair_patterns(h)
        .into_iter()
        .find(|p| p.u == pattern.u && p.v == pattern.v);
    match fresh {
        Some(ref p) if p == pattern => Ok(()),
        _ => Err(Error::Argument(format!(
            "pattern for columns ({}, {}) does not match the matrix",
            pattern.u, pattern.v
        ))),
    }
}

/// Adds one parameter on a qualifying column pair: both entries of every
/// opposite row gain `e^(it)`. Re-dephases when the pair includes column 0,
/// where the new phase lands on the first column.
pub fn parametrize_pair(h: &HadamardMatrix, pattern: &PairPattern) -> Result<AffinePhaseMatrix> {
    if h.order() < 4 {
        return Err(Error::Dimension("pair parametrization needs order >= 4".into()));
    }
    if !h.is_dephased() {
        return Err(Error::NotDephased);
    }
    check_pattern(h, pattern)?;
    let mut f = h.as_family(vec!["t".into()]);
    for &r in &pattern.opposite_rows {
        f.entry_mut(r, pattern.u).form.add_at(0, 1);
        f.entry_mut(r, pattern.v).form.add_at(0, 1);
    }
    let f = dephase_family(&f);
    match f.check_family() {
        Ok(()) => Ok(f),
        Err(fail) => Err(Error::FamilyNotHadamard {
            i: fail.row_i,
            j: fail.row_j,
        }),
    }
}

fn class_of(deph: &HadamardMatrix, col: usize) -> (bool, bool) {
    (deph.phase(1, col).is_zero(), deph.phase(2, col).is_zero())
}

/// Kind of constraint a column position carries in the canonical form.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    First,
    /// Row 1 positive, row 2 negative (position 1).
    PM,
    /// Rows 1 and 2 both positive (positions 2, 3).
    PP,
    /// Rows 1 and 2 both negative (last two positions).
    MM,
    /// Row 1 positive, row 2 free.
    PlusAny,
    /// Row 1 negative, row 2 free.
    MinusAny,
}

fn slot(pos: usize, n: usize) -> Slot {
    match pos {
        0 => Slot::First,
        1 => Slot::PM,
        2 | 3 => Slot::PP,
        p if p >= n - 2 => Slot::MM,
        p if p < n / 2 => Slot::PlusAny,
        _ => Slot::MinusAny,
    }
}

fn slot_accepts(s: Slot, class: (bool, bool)) -> bool {
    match s {
        Slot::First => true,
        Slot::PM => class == (true, false),
        Slot::PP => class == (true, true),
        Slot::MM => class == (false, false),
        Slot::PlusAny => class.0,
        Slot::MinusAny => !class.0,
    }
}

/// Whether the unused columns can still fill the positions after `pos`.
fn fillable(deph: &HadamardMatrix, used: &[bool], pos: usize) -> bool {
    let n = deph.order();
    let mut cols = [0usize; 4];
    for c in 0..n {
        if !used[c] {
            let (a, b) = class_of(deph, c);
            cols[(a as usize) * 2 + (b as usize)] += 1;
        }
    }
    let (mm, mp, pm, pp) = (cols[0], cols[1], cols[2], cols[3]);
    let mut need = [0usize; 4];
    let mut flex_plus = 0;
    let mut flex_minus = 0;
    for p in pos + 1..n {
        match slot(p, n) {
            Slot::First => return false,
            Slot::PM => need[2] += 1,
            Slot::PP => need[3] += 1,
            Slot::MM => need[0] += 1,
            Slot::PlusAny => flex_plus += 1,
            Slot::MinusAny => flex_minus += 1,
        }
    }
    pm >= need[2]
        && pp >= need[3]
        && mm >= need[0]
        && pp + pm == need[3] + need[2] + flex_plus
        && mm + mp == need[0] + flex_minus
}

/// Brings a real Hadamard matrix to the canonical form used by
/// [`parametrize_real`]: dephased, second row equal to `(1,..,1,-1,..,-1)`,
/// third row `-1` at position 1, `+1` at positions 2 and 3, `-1` at the last
/// two positions (0-based). Rows 1 and 2 stay in place; the columns get the
/// lexicographically least arrangement meeting the constraints.
pub fn canonicalize_real(h: &HadamardMatrix) -> Result<(HadamardMatrix, EquivalenceOp)> {
    let n = h.order();
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    if n < 12 || n % 4 != 0 {
        return Err(Error::Dimension(format!(
            "canonical form needs order >= 12 divisible by 4, got {n}"
        )));
    }
    h.verify_hadamard()?;
    let (deph, deph_op) = dephase(h);
    let mut used = vec![false; n];
    used[0] = true;
    let mut perm = vec![0usize; n];
    for pos in 1..n {
        let kind = slot(pos, n);
        let mut placed = false;
        for c in 1..n {
            if used[c] || !slot_accepts(kind, class_of(&deph, c)) {
                continue;
            }
            used[c] = true;
            if fillable(&deph, &used, pos) {
                perm[pos] = c;
                placed = true;
                break;
            }
            used[c] = false;
        }
        if !placed {
            // Unreachable for a genuine real Hadamard matrix: all four sign
            // classes over rows (1, 2) have N/4 columns each.
            return Err(Error::Argument(
                "no column arrangement achieves the canonical form".into(),
            ));
        }
    }
    let perm_op = EquivalenceOp {
        row_perm: (0..n).collect(),
        col_perm: perm,
        left: vec![RationalPhase::ZERO; n],
        right: vec![RationalPhase::ZERO; n],
    };
    let op = deph_op.then(&perm_op);
    let canon = op.apply(h)?;
    Ok((canon, op))
}

/// Builds the (N/2+1)-parameter orbit of a real Hadamard matrix of order
/// N >= 12 divisible by 4.
///
/// Steps, on the canonical form: parameter i (i = 1..N/2) multiplies the
/// entries of columns 2i-1, 2i (1-based) by `e^(i x_i)` in the N/2 rows where
/// those columns differ; the family is re-dephased (which moves x_1 around,
/// whereupon x_1 is replaced by -x_1); finally the last N/2 entries of the
/// first two rows are multiplied by `e^(-i x_{N/2+1})` and the last N/2
/// columns by `e^(i x_{N/2+1})`.
pub fn parametrize_real(h: &HadamardMatrix) -> Result<AffinePhaseMatrix> {
    let (canon, _) = canonicalize_real(h)?;
    let n = canon.order();
    let p = n / 2 + 1;
    let params = (0..p).map(param_name).collect();
    let mut f = canon.as_family(params);
    for i in 0..n / 2 {
        let (u, v) = (2 * i, 2 * i + 1);
        for r in 0..n {
            if canon.phase(r, u) != canon.phase(r, v) {
                f.entry_mut(r, u).form.add_at(i, 1);
                f.entry_mut(r, v).form.add_at(i, 1);
            }
        }
    }
    let mut f = dephase_family(&f);
    for i in 0..n {
        for j in 0..n {
            let form = &mut f.entry_mut(i, j).form;
            let c = form.coeffs()[0];
            form.add_at(0, -2 * c);
        }
    }
    let last = p - 1;
    for j in n / 2..n {
        f.entry_mut(0, j).form.add_at(last, -1);
        f.entry_mut(1, j).form.add_at(last, -1);
        for r in 0..n {
            f.entry_mut(r, j).form.add_at(last, 1);
        }
    }
    debug_assert!(f.is_dephased());
    match f.check_family() {
        Ok(()) => Ok(f),
        Err(fail) => Err(Error::FamilyNotHadamard {
            i: fail.row_i,
            j: fail.row_j,
        }),
    }
}

/// Rank of the stacked coefficient vectors: the number of independent
/// directions the parameters actually move the phases in.
pub fn family_dimension(f: &AffinePhaseMatrix) -> usize {
    if f.param_count() == 0 {
        return 0;
    }
    let rows = f
        .rows()
        .iter()
        .flatten()
        .map(|e| e.form.coeffs().to_vec())
        .collect::<Vec<_>>();
    integer_rank_i64(&rows)
}
