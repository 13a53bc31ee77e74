//! Block composition of Hadamard matrices and structural detection of it.
//!
//! A matrix built as `K[(p,r)][(q,s)] = M[p][q] + N_q[r][s]` (log form) from a
//! Hadamard matrix `M` of order k and blocks `N_1..N_k` of order n carries a
//! combinatorial fingerprint: the nk columns split into k sets of n and the nk
//! rows into n groups of k such that any two rows in a group have constant
//! phase difference on every column set. That fingerprint survives row/column
//! permutations and diagonal phase shifts, so [`dita_detect`] searches for it
//! on the dephased form (and its transpose) and a refutation rules the
//! structure out for the whole equivalence class.

use crate::equivalence::dephase;
use crate::error::{Error, Result};
use crate::matrix::HadamardMatrix;
use serde::{Deserialize, Serialize};

/// `K[(p,r)][(q,s)] = m_pq * (N_q)_rs`, one block per column of `m`.
pub fn dita_compose(m: &HadamardMatrix, blocks: &[HadamardMatrix]) -> Result<HadamardMatrix> {
    let k = m.order();
    if blocks.len() != k {
        return Err(Error::Dimension(format!(
            "need one block per column: expected {k}, got {}",
            blocks.len()
        )));
    }
    m.verify_hadamard()?;
    let n = blocks[0].order();
    for b in blocks {
        if b.order() != n {
            return Err(Error::Dimension("blocks must all have the same order".into()));
        }
        b.verify_hadamard()?;
    }
    let order = n * k;
    let entries = (0..order)
        .map(|row| {
            let (p, r) = (row / n, row % n);
            (0..order)
                .map(|col| {
                    let (q, s) = (col / n, col % n);
                    m.phase(p, q) + blocks[q].phase(r, s)
                })
                .collect()
        })
        .collect();
    HadamardMatrix::new(entries)
}

/// True iff rows `r` and `s` have the same mod-1 phase difference at every
/// column in `set`.
pub fn rows_equivalent_on(
    l: &HadamardMatrix,
    r: usize,
    s: usize,
    set: &[usize],
) -> Result<bool> {
    let order = l.order();
    if r >= order || s >= order {
        return Err(Error::Argument(format!("row index out of range for order {order}")));
    }
    if set.is_empty() {
        return Err(Error::Argument("index set must be nonempty".into()));
    }
    if let Some(&bad) = set.iter().find(|&&i| i >= order) {
        return Err(Error::Argument(format!("column index {bad} out of range")));
    }
    let d0 = l.phase(r, set[0]) - l.phase(s, set[0]);
    Ok(set.iter().all(|&i| l.phase(r, i) - l.phase(s, i) == d0))
}

/// Decides whether rows `r`, `s` admit `d` disjoint `n`-element column sets
/// with constant difference on each, returning the sets when they exist.
///
/// Columns with equal difference are interchangeable, so the answer only
/// depends on the difference-class sizes: the sets exist iff the classes can
/// be cut into at least `d` chunks of size `n`.
pub fn dn_equivalent(
    l: &HadamardMatrix,
    r: usize,
    s: usize,
    d: usize,
    n: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let order = l.order();
    if r >= order || s >= order {
        return Err(Error::Argument(format!("row index out of range for order {order}")));
    }
    if d == 0 || n == 0 || d * n > order {
        return Err(Error::Argument(format!(
            "need 1 <= d, 1 <= n, d*n <= {order}; got d={d}, n={n}"
        )));
    }
    let mut classes = std::collections::BTreeMap::new();
    for j in 0..order {
        let diff = l.phase(r, j) - l.phase(s, j);
        classes.entry(diff).or_insert_with(Vec::new).push(j);
    }
    let mut sets = Vec::with_capacity(d);
    for cols in classes.values() {
        for chunk in cols.chunks_exact(n) {
            sets.push(chunk.to_vec());
            if sets.len() == d {
                return Ok(Some(sets));
            }
        }
    }
    Ok(None)
}

/// Outcome of the dephased-core shortcut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreScan {
    /// No phase-0 entry in the core; the matrix cannot carry the block
    /// structure in any equivalent form.
    NotDitaType,
    Inconclusive,
}

/// Scans the core of a dephased matrix for an entry equal to 1.
pub fn core_scan(h: &HadamardMatrix) -> Result<CoreScan> {
    if !h.is_dephased() {
        return Err(Error::NotDephased);
    }
    for i in 1..h.order() {
        for j in 1..h.order() {
            if h.phase(i, j).is_zero() {
                return Ok(CoreScan::Inconclusive);
            }
        }
    }
    Ok(CoreScan::NotDitaType)
}

/// Witness that a matrix carries the block-composition row/column structure.
///
/// Indices are 0-based and refer to the dephased form of the matrix handed to
/// [`dita_detect`], transposed first when `transposed` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DitaCertificate {
    pub n: usize,
    pub k: usize,
    pub transposed: bool,
    /// k disjoint n-element column sets.
    pub column_partition: Vec<Vec<usize>>,
    /// n disjoint k-element row groups.
    pub row_grouping: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl DitaCertificate {
    /// Re-derives the dephased (and possibly transposed) form of `h` and
    /// checks every defining condition of the certificate against it.
    pub fn validate_against(&self, h: &HadamardMatrix) -> bool {
        let order = h.order();
        if self.n < 2 || self.k < 2 || self.n * self.k != order {
            return false;
        }
        let mut l = dephase(h).0;
        if self.transposed {
            l = l.transposed();
        }
        let covers = |sets: &[Vec<usize>], size: usize| {
            let mut seen = vec![false; order];
            sets.len() == order / size
                && sets.iter().all(|s| {
                    s.len() == size && s.iter().all(|&i| i < order && !std::mem::replace(&mut seen[i], true))
                })
        };
        if !covers(&self.column_partition, self.n) || !covers(&self.row_grouping, self.k) {
            return false;
        }
        self.row_grouping.iter().all(|tuple| {
            tuple.iter().enumerate().all(|(a, &r)| {
                tuple[a + 1..].iter().all(|&s| {
                    self.column_partition
                        .iter()
                        .all(|set| rows_equivalent_on(&l, r, s, set).unwrap())
                })
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DitaVerdict {
    Certificate(DitaCertificate),
    /// The structure is absent from every searched case. `core_scan` records
    /// that the dephased core contained no 1 and the search was skipped.
    Refutation {
        cases: Vec<(usize, usize)>,
        nodes: u64,
        core_scan: bool,
    },
    /// Some case hit the node budget before finishing, and no case found a
    /// certificate; nothing can be concluded.
    BudgetExhausted {
        cases: Vec<(usize, usize)>,
        nodes: u64,
    },
}

/// Cap on backtracking nodes per factorization case.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

enum CaseOutcome {
    Found {
        column_partition: Vec<Vec<usize>>,
        row_grouping: Vec<Vec<usize>>,
        nodes: u64,
    },
    Refuted(u64),
    Exhausted(u64),
}

struct CaseSearch<'a> {
    l: &'a HadamardMatrix,
    n: usize,
    k: usize,
    budget: u64,
    nodes: u64,
}

enum Step {
    /// Final column classes plus the row grouping, captured at the leaf
    /// because the unwind dismantles the shared state.
    Found(Vec<usize>, Vec<Vec<usize>>),
    NotFound,
    OutOfBudget,
}

impl CaseSearch<'_> {
    /// Dense relabel of column classes split by the difference of rows
    /// `r0`, `s`; None when a resulting class size is not divisible by n.
    ///
    /// Every final column set lies inside one class, and the sets have size
    /// n and cover everything, so each class must stay a multiple of n.
    fn refine(&self, classes: &[usize], r0: usize, s: usize) -> Option<Vec<usize>> {
        let order = self.l.order();
        let mut ids = std::collections::HashMap::new();
        let mut out = vec![0usize; order];
        let mut sizes = Vec::new();
        for j in 0..order {
            let key = (classes[j], self.l.phase(r0, j) - self.l.phase(s, j));
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == sizes.len() {
                sizes.push(0usize);
            }
            sizes[id] += 1;
            out[j] = id;
        }
        if sizes.iter().all(|c| c % self.n == 0) {
            Some(out)
        } else {
            None
        }
    }

    fn search(
        &mut self,
        tuples: &mut Vec<Vec<usize>>,
        assigned: &mut [bool],
        classes: &[usize],
    ) -> Step {
        let next_row = assigned.iter().position(|a| !a);
        let open = tuples.last().map_or(false, |t| t.len() < self.k);
        match (next_row, open) {
            (None, _) => Step::Found(classes.to_vec(), tuples.clone()),
            (Some(r), false) => {
                // A fresh group must start with the lowest free row: groups
                // are unordered, so this loses nothing and kills symmetry.
                tuples.push(vec![r]);
                assigned[r] = true;
                let step = self.search(tuples, assigned, classes);
                assigned[r] = false;
                tuples.pop();
                step
            }
            (Some(_), true) => {
                let tuple_head = tuples.last().unwrap()[0];
                let after = *tuples.last().unwrap().last().unwrap();
                for s in after + 1..self.l.order() {
                    if assigned[s] {
                        continue;
                    }
                    self.nodes += 1;
                    if self.nodes > self.budget {
                        return Step::OutOfBudget;
                    }
                    let Some(refined) = self.refine(classes, tuple_head, s) else {
                        continue;
                    };
                    tuples.last_mut().unwrap().push(s);
                    assigned[s] = true;
                    let step = self.search(tuples, assigned, &refined);
                    assigned[s] = false;
                    tuples.last_mut().unwrap().pop();
                    if !matches!(step, Step::NotFound) {
                        return step;
                    }
                }
                Step::NotFound
            }
        }
    }

    fn run(mut self) -> CaseOutcome {
        let order = self.l.order();
        let mut tuples = Vec::new();
        let mut assigned = vec![false; order];
        let classes = vec![0usize; order];
        match self.search(&mut tuples, &mut assigned, &classes) {
            Step::Found(final_classes, row_grouping) => {
                // Chunk each class into column sets of size n, in column order.
                let class_count = final_classes.iter().max().unwrap() + 1;
                let mut by_class = vec![Vec::new(); class_count];
                for (j, &c) in final_classes.iter().enumerate() {
                    by_class[c].push(j);
                }
                let column_partition = by_class
                    .iter()
                    .flat_map(|cols| cols.chunks_exact(self.n).map(<[usize]>::to_vec))
                    .collect();
                CaseOutcome::Found {
                    column_partition,
                    row_grouping,
                    nodes: self.nodes,
                }
            }
            Step::NotFound => CaseOutcome::Refuted(self.nodes),
            Step::OutOfBudget => CaseOutcome::Exhausted(self.nodes),
        }
    }
}

/// Searches the dephased form of `h` and its transpose for the block
/// structure, over every factorization `order = n * k` with n, k >= 2.
///
/// `budget` bounds the backtracking nodes of each case independently, so the
/// outcome does not depend on evaluation order: the certificate from the
/// earliest case wins, a refutation needs every case to finish, and anything
/// else is reported as exhaustion.
pub fn dita_detect(h: &HadamardMatrix, budget: u64) -> DitaVerdict {
    let order = h.order();
    let cases: Vec<(usize, usize)> = (2..=order / 2)
        .filter(|n| order % n == 0 && order / n >= 2)
        .map(|n| (n, order / n))
        .collect();
    if cases.is_empty() {
        return DitaVerdict::Refutation {
            cases,
            nodes: 0,
            core_scan: false,
        };
    }
    let deph = dephase(h).0;
    if matches!(core_scan(&deph), Ok(CoreScan::NotDitaType)) {
        return DitaVerdict::Refutation {
            cases: Vec::new(),
            nodes: 0,
            core_scan: true,
        };
    }
    let transposed = deph.transposed();
    let sides = [(&deph, false), (&transposed, true)];
    let runs: Vec<(usize, usize, bool)> = cases
        .iter()
        .flat_map(|&(n, k)| sides.iter().map(move |&(_, t)| (n, k, t)))
        .collect();
    let outcomes: Vec<CaseOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = runs
            .iter()
            .map(|&(n, k, t)| {
                let l = if t { &transposed } else { &deph };
                scope.spawn(move || {
                    CaseSearch {
                        l,
                        n,
                        k,
                        budget,
                        nodes: 0,
                    }
                    .run()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut total_nodes = 0u64;
    let mut exhausted = false;
    let mut cert = None;
    for (&(n, k, t), outcome) in runs.iter().zip(outcomes) {
        match outcome {
            CaseOutcome::Found {
                column_partition,
                row_grouping,
                nodes,
            } => {
                total_nodes += nodes;
                if cert.is_none() {
                    cert = Some(DitaCertificate {
                        n,
                        k,
                        transposed: t,
                        column_partition,
                        row_grouping,
                        nodes,
                    });
                }
            }
            CaseOutcome::Refuted(nodes) => total_nodes += nodes,
            CaseOutcome::Exhausted(nodes) => {
                total_nodes += nodes;
                exhausted = true;
            }
        }
    }
    if let Some(c) = cert {
        debug_assert!(c.validate_against(h));
        return DitaVerdict::Certificate(c);
    }
    if exhausted {
        DitaVerdict::BudgetExhausted {
            cases,
            nodes: total_nodes,
        }
    } else {
        DitaVerdict::Refutation {
            cases,
            nodes: total_nodes,
            core_scan: false,
        }
    }
}

/// Checks that the canonical four-row sign block of order 4p (rows split into
/// four p-wide quarters with signs ++++, ++--, +-+-, +--+) admits no fifth
/// {1,-1} row orthogonal to all four. Enumerates all 2^(4p) candidates;
/// p is capped at 5 to keep that feasible.
pub fn no_orthogonal_extension(p: usize) -> Result<bool> {
    if p % 2 == 0 || !(3..=5).contains(&p) {
        return Err(Error::Argument(format!("p must be 3 or 5, got {p}")));
    }
    let rows = canonical_sign_rows(p);
    let m = 4 * p;
    // Bit j set = entry -1 in column j; rows are orthogonal iff they differ
    // in exactly half the columns.
    let orthogonal = |w: u32, v: u32| (w ^ v).count_ones() as usize == 2 * p;
    for w in 0u32..1 << m {
        if rows.iter().all(|&v| orthogonal(w, v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn canonical_sign_rows(p: usize) -> [u32; 4] {
    let quarter = |q: usize| ((1u32 << p) - 1) << (q * p);
    [
        0,
        quarter(2) | quarter(3),
        quarter(1) | quarter(3),
        quarter(1) | quarter(2),
    ]
}
