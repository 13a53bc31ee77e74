//! Log-phase matrices, affine families, and their orthogonality checks.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cyclotomic::vanishing_root_sum;
use crate::error::{Error, Result};
use crate::phase::{AffineEntry, RationalPhase};

/// A square matrix with unimodular entries, stored in log form: the entry
/// `q` stands for `exp(2*pi*i*q)`. The name records intent, not a checked
/// invariant; `is_hadamard` performs the actual test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<Vec<RationalPhase>>,
}

impl HadamardMatrix {
    pub fn new(entries: Vec<Vec<RationalPhase>>) -> Result<Self> {
        let order = entries.len();
        if order == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if entries.iter().any(|r| r.len() != order) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Ok(HadamardMatrix { order, entries })
    }

    /// The Fourier matrix of order `n`: entry `(j, k)` is the phase `jk/n`.
    pub fn fourier(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("order must be positive".into()));
        }
        let entries = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| RationalPhase::new((j * k) as i64, n as i64).unwrap())
                    .collect()
            })
            .collect();
        HadamardMatrix::new(entries)
    }

    /// Kronecker product in log form: phases add blockwise.
    pub fn tensor_product(a: &HadamardMatrix, b: &HadamardMatrix) -> Self {
        let (na, nb) = (a.order, b.order);
        let order = na * nb;
        let entries = (0..order)
            .map(|i| {
                (0..order)
                    .map(|j| a.entries[i / nb][j / nb] + b.entries[i % nb][j % nb])
                    .collect()
            })
            .collect();
        HadamardMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn phase(&self, i: usize, j: usize) -> RationalPhase {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<RationalPhase>] {
        &self.entries
    }

    pub fn transposed(&self) -> Self {
        let entries = (0..self.order)
            .map(|j| (0..self.order).map(|i| self.entries[i][j]).collect())
            .collect();
        HadamardMatrix {
            order: self.order,
            entries,
        }
    }

    /// True when the rows are pairwise orthogonal, i.e. `H H* = N I`.
    /// Exact for phases of bounded denominator, floating beyond that.
    pub fn is_hadamard(&self) -> bool {
        self.verify_hadamard().is_ok()
    }

    /// Like `is_hadamard`, reporting the first failing row pair.
    pub fn verify_hadamard(&self) -> Result<()> {
        for i in 0..self.order {
            for j in i + 1..self.order {
                let diffs: Vec<RationalPhase> = (0..self.order)
                    .map(|k| self.entries[i][k] - self.entries[j][k])
                    .collect();
                if !vanishing_root_sum(&diffs) {
                    return Err(Error::NotHadamard { i, j });
                }
            }
        }
        Ok(())
    }

    /// First row and first column all ones.
    pub fn is_dephased(&self) -> bool {
        (0..self.order).all(|j| self.entries[0][j].is_zero())
            && (0..self.order).all(|i| self.entries[i][0].is_zero())
    }

    /// Entries limited to `+1` and `-1`.
    pub fn is_real(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|q| q.is_zero() || *q == RationalPhase::HALF)
    }

    /// Entries limited to fourth roots of unity.
    pub fn is_quarter_phase(&self) -> bool {
        self.entries.iter().flatten().all(|q| 4 % q.denom() == 0)
    }

    pub fn to_numeric(&self) -> NumericMatrix {
        NumericMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|q| q.to_complex()).collect())
                .collect(),
        }
    }

    /// The same matrix as a parameter-free affine family.
    pub fn as_family(&self, params: Vec<String>) -> AffinePhaseMatrix {
        let arity = params.len();
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&q| AffineEntry::constant(q, arity)).collect())
            .collect();
        AffinePhaseMatrix {
            order: self.order,
            params,
            entries,
        }
    }
}

/// Parameter names for generated families: a, b, c, ... then x27, x28, ...
pub(crate) fn param_name(idx: usize) -> String {
    if idx < 26 {
        char::from(b'a' + idx as u8).to_string()
    } else {
        format!("x{}", idx + 1)
    }
}

/// Witness that an affine family is not Hadamard for generic parameters:
/// for the row pair `(row_i, row_j)` the column group sharing the
/// coefficient-difference vector `diff` has a nonvanishing base sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyFailure {
    pub row_i: usize,
    pub row_j: usize,
    pub diff: Vec<i64>,
}

/// An affine family of unimodular matrices: entry `(i, j)` is
/// `exp(i*(2*pi*base_ij + R_ij . x))` with integer coefficient vectors
/// `R_ij` over the named parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffinePhaseMatrix {
    order: usize,
    params: Vec<String>,
    entries: Vec<Vec<AffineEntry>>,
}

impl AffinePhaseMatrix {
    pub fn new(params: Vec<String>, entries: Vec<Vec<AffineEntry>>) -> Result<Self> {
        let order = entries.len();
        if order == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if entries.iter().any(|r| r.len() != order) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        let arity = params.len();
        if entries
            .iter()
            .flatten()
            .any(|e| e.form.arity() != arity)
        {
            return Err(Error::Dimension(
                "entry coefficient vectors must match the parameter count".into(),
            ));
        }
        Ok(AffinePhaseMatrix {
            order,
            params,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineEntry {
        &self.entries[i][j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut AffineEntry {
        &mut self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<AffineEntry>] {
        &self.entries
    }

    /// The base point: all parameters set to zero.
    pub fn base(&self) -> HadamardMatrix {
        HadamardMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|e| e.base).collect())
                .collect(),
        }
    }

    pub fn transposed(&self) -> Self {
        let entries = (0..self.order)
            .map(|j| {
                (0..self.order)
                    .map(|i| self.entries[i][j].clone())
                    .collect()
            })
            .collect();
        AffinePhaseMatrix {
            order: self.order,
            params: self.params.clone(),
            entries,
        }
    }

    pub fn is_dephased(&self) -> bool {
        let one = |e: &AffineEntry| e.base.is_zero() && e.form.is_zero();
        (0..self.order).all(|j| one(&self.entries[0][j]))
            && (0..self.order).all(|i| one(&self.entries[i][0]))
    }

    /// Whether the family is Hadamard for every parameter value.
    ///
    /// For each row pair, columns are grouped by the difference of their
    /// coefficient vectors; the inner product is identically zero iff each
    /// group's base-phase sum vanishes, because distinct integer frequency
    /// vectors give linearly independent functions of the parameters.
    pub fn check_family(&self) -> std::result::Result<(), FamilyFailure> {
        for i in 0..self.order {
            for j in i + 1..self.order {
                let mut groups: BTreeMap<Vec<i64>, Vec<RationalPhase>> = BTreeMap::new();
                for k in 0..self.order {
                    let d = &self.entries[i][k].form - &self.entries[j][k].form;
                    let b = self.entries[i][k].base - self.entries[j][k].base;
                    groups.entry(d.coeffs().to_vec()).or_default().push(b);
                }
                for (diff, bases) in groups {
                    if !vanishing_root_sum(&bases) {
                        return Err(FamilyFailure {
                            row_i: i,
                            row_j: j,
                            diff,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_hadamard_family(&self) -> bool {
        self.check_family().is_ok()
    }

    /// Evaluates the family at a parameter point given in radians.
    /// The zero point stays exact; anything else is floating.
    pub fn eval(&self, x: &[f64]) -> Result<Evaluated> {
        if x.len() != self.params.len() {
            return Err(Error::Argument(format!(
                "expected {} parameter values, got {}",
                self.params.len(),
                x.len()
            )));
        }
        if x.iter().all(|&v| v == 0.0) {
            return Ok(Evaluated::Exact(self.base()));
        }
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.value(x)).collect())
            .collect();
        Ok(Evaluated::Numeric(NumericMatrix {
            order: self.order,
            entries,
        }))
    }
}

/// Result of evaluating a family: exact log form at the zero point,
/// floating entries otherwise.
#[derive(Clone, Debug)]
pub enum Evaluated {
    Exact(HadamardMatrix),
    Numeric(NumericMatrix),
}

impl Evaluated {
    /// Hadamard test at the evaluation point; tolerance applies to the
    /// numeric case only.
    pub fn is_hadamard(&self, tol: f64) -> bool {
        match self {
            Evaluated::Exact(h) => h.is_hadamard(),
            Evaluated::Numeric(m) => m.max_gram_deviation() < tol,
        }
    }
}

/// A concrete complex matrix (unit-modulus entries up to rounding).
#[derive(Clone, Debug)]
pub struct NumericMatrix {
    order: usize,
    entries: Vec<Vec<Complex64>>,
}

impl NumericMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    /// `max_ij |(M M*)_ij - N delta_ij|`.
    pub fn max_gram_deviation(&self) -> f64 {
        let n = self.order;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let dot: Complex64 = (0..n)
                    .map(|k| self.entries[i][k] * self.entries[j][k].conj())
                    .sum();
                let target = if i == j { n as f64 } else { 0.0 };
                worst = worst.max((dot - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_hadamard(&self, tol: f64) -> bool {
        self.max_gram_deviation() < tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::LinearForm;

    fn q(n: i64, d: i64) -> RationalPhase {
        RationalPhase::new(n, d).unwrap()
    }

    #[test]
    fn fourier_matrices_are_hadamard() {
        for n in 1..=12 {
            let f = HadamardMatrix::fourier(n).unwrap();
            assert!(f.is_hadamard(), "order {n}");
            assert!(f.is_dephased());
            assert!(f.to_numeric().is_hadamard(1e-9));
        }
    }

    #[test]
    fn equal_rows_are_not_hadamard() {
        let m = HadamardMatrix::new(vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1)],
        ])
        .unwrap();
        assert!(!m.is_hadamard());
        match m.verify_hadamard() {
            Err(Error::NotHadamard { i: 0, j: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn real_and_quarter_phase_predicates() {
        let f2 = HadamardMatrix::fourier(2).unwrap();
        assert!(f2.is_real() && f2.is_quarter_phase());
        let f4 = HadamardMatrix::fourier(4).unwrap();
        assert!(!f4.is_real() && f4.is_quarter_phase());
        let f3 = HadamardMatrix::fourier(3).unwrap();
        assert!(!f3.is_real() && !f3.is_quarter_phase());
    }

    /// One-parameter family on the real order-4 matrix: rows 1 and 3 carry
    /// `-t` in columns 2 and 3. Verified Hadamard for all `t` by hand.
    fn order4_family() -> AffinePhaseMatrix {
        let h: Vec<Vec<i64>> = vec![
            vec![1, 1, 1, 1],
            vec![1, -1, 1, -1],
            vec![1, 1, -1, -1],
            vec![1, -1, -1, 1],
        ];
        let entries: Vec<Vec<AffineEntry>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let base = if h[i][j] == 1 { q(0, 1) } else { q(1, 2) };
                        let mut form = LinearForm::zero(1);
                        if (i == 1 || i == 3) && (j == 2 || j == 3) {
                            form.add_at(0, -1);
                        }
                        AffineEntry { base, form }
                    })
                    .collect()
            })
            .collect();
        AffinePhaseMatrix::new(vec!["t".into()], entries).unwrap()
    }

    #[test]
    fn family_check_accepts_valid_family() {
        let fam = order4_family();
        assert!(fam.is_hadamard_family());
        // Numeric cross-check at a few points.
        for x in [[0.7], [2.1], [-0.4]] {
            match fam.eval(&x).unwrap() {
                Evaluated::Numeric(m) => assert!(m.is_hadamard(1e-9)),
                Evaluated::Exact(_) => panic!("nonzero point must be numeric"),
            }
        }
    }

    #[test]
    fn family_check_rejects_flipped_coefficient() {
        let mut fam = order4_family();
        // Breaking a single coefficient must produce a witness, and the
        // numeric evaluation at a generic point must fail too.
        fam.entry_mut(1, 2).form = LinearForm::from_coeffs(vec![1]);
        let failure = fam.check_family().unwrap_err();
        assert_eq!((failure.row_i, failure.row_j), (0, 1));
        match fam.eval(&[0.9]).unwrap() {
            Evaluated::Numeric(m) => assert!(!m.is_hadamard(1e-9)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn eval_at_zero_is_exact() {
        let fam = order4_family();
        match fam.eval(&[0.0]).unwrap() {
            Evaluated::Exact(h) => assert_eq!(h, fam.base()),
            _ => panic!("zero point must be exact"),
        }
        assert!(fam.eval(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn parameter_free_family_check_is_plain_orthogonality() {
        let f2 = HadamardMatrix::fourier(2).unwrap().as_family(vec![]);
        assert!(f2.is_hadamard_family());
        let ones = HadamardMatrix::new(vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1)],
        ])
        .unwrap()
        .as_family(vec![]);
        assert!(!ones.is_hadamard_family());
    }
}
