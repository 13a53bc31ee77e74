//! Hadamard equivalence: row/column permutations and unimodular diagonal
//! factors, in log form.

use crate::error::{Error, Result};
use crate::matrix::{AffinePhaseMatrix, HadamardMatrix};
use crate::phase::RationalPhase;

/// An equivalence operation `D1 P1 H P2 D2` in log form: output entry
/// `(i, j)` is `left[i] + H[row_perm[i]][col_perm[j]] + right[j]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceOp {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub left: Vec<RationalPhase>,
    pub right: Vec<RationalPhase>,
}

impl EquivalenceOp {
    pub fn identity(n: usize) -> Self {
        EquivalenceOp {
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
            left: vec![RationalPhase::ZERO; n],
            right: vec![RationalPhase::ZERO; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.row_perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.col_perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.left.iter().all(|q| q.is_zero())
            && self.right.iter().all(|q| q.is_zero())
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.row_perm.len() != n
            || self.col_perm.len() != n
            || self.left.len() != n
            || self.right.len() != n
        {
            return Err(Error::Dimension("operation size mismatch".into()));
        }
        if !is_permutation(&self.row_perm) || !is_permutation(&self.col_perm) {
            return Err(Error::Argument("not a permutation".into()));
        }
        Ok(())
    }

    pub fn apply(&self, h: &HadamardMatrix) -> Result<HadamardMatrix> {
        let n = h.order();
        self.validate(n)?;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.left[i] + h.phase(self.row_perm[i], self.col_perm[j]) + self.right[j]
                    })
                    .collect()
            })
            .collect();
        HadamardMatrix::new(entries)
    }

    /// Applies the permutations and constant phases to a family. Coefficient
    /// vectors travel with their entries; the diagonals stay constant, so
    /// membership of the family is preserved parameter-wise.
    pub fn apply_family(&self, f: &AffinePhaseMatrix) -> Result<AffinePhaseMatrix> {
        let n = f.order();
        self.validate(n)?;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = f.entry(self.row_perm[i], self.col_perm[j]);
                        crate::phase::AffineEntry {
                            base: self.left[i] + e.base + self.right[j],
                            form: e.form.clone(),
                        }
                    })
                    .collect()
            })
            .collect();
        AffinePhaseMatrix::new(f.params().to_vec(), entries)
    }

    pub fn inverse(&self) -> Self {
        let n = self.row_perm.len();
        let mut row_inv = vec![0; n];
        let mut col_inv = vec![0; n];
        for i in 0..n {
            row_inv[self.row_perm[i]] = i;
            col_inv[self.col_perm[i]] = i;
        }
        EquivalenceOp {
            left: (0..n).map(|p| -self.left[row_inv[p]]).collect(),
            right: (0..n).map(|q| -self.right[col_inv[q]]).collect(),
            row_perm: row_inv,
            col_perm: col_inv,
        }
    }

    /// The single operation equal to `self` followed by `next`:
    /// `self.then(next).apply(h) == next.apply(&self.apply(h))`.
    pub fn then(&self, next: &EquivalenceOp) -> Self {
        let n = self.row_perm.len();
        assert_eq!(next.row_perm.len(), n, "operation sizes must match");
        EquivalenceOp {
            row_perm: (0..n).map(|i| self.row_perm[next.row_perm[i]]).collect(),
            col_perm: (0..n).map(|j| self.col_perm[next.col_perm[j]]).collect(),
            left: (0..n)
                .map(|i| next.left[i] + self.left[next.row_perm[i]])
                .collect(),
            right: (0..n)
                .map(|j| next.right[j] + self.right[next.col_perm[j]])
                .collect(),
        }
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Normalizes the first row and column to ones by diagonal phases only.
/// Returns the dephased matrix and the operation that produced it.
pub fn dephase(h: &HadamardMatrix) -> (HadamardMatrix, EquivalenceOp) {
    let n = h.order();
    let op = EquivalenceOp {
        row_perm: (0..n).collect(),
        col_perm: (0..n).collect(),
        left: (0..n).map(|i| -h.phase(i, 0)).collect(),
        right: (0..n).map(|j| h.phase(0, 0) - h.phase(0, j)).collect(),
    };
    let out = op.apply(h).expect("identity-shaped op always applies");
    debug_assert!(out.is_dephased());
    (out, op)
}

/// Dephases an affine family. The diagonal factors may depend on the
/// parameters here (entry `(i, j)` becomes `e_ij - e_i0 - e_0j + e_00`,
/// coefficient vectors included), so no constant `EquivalenceOp` represents
/// this step; the result is the same family written in dephased form.
pub fn dephase_family(f: &AffinePhaseMatrix) -> AffinePhaseMatrix {
    let n = f.order();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let corner = f.entry(0, 0);
                    let e = &(&(f.entry(i, j) - f.entry(i, 0)) - f.entry(0, j)) + corner;
                    e
                })
                .collect()
        })
        .collect();
    let out = AffinePhaseMatrix::new(f.params().to_vec(), entries)
        .expect("dephasing preserves shape");
    debug_assert!(out.is_dephased());
    out
}
