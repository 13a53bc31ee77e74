//! Conference matrices and the complex Hadamard families built from them.
//!
//! A conference matrix `C` of order `N` has zero diagonal, `+1`/`-1` entries
//! elsewhere, and satisfies `C C^T = (N-1) I`. A symmetric `C` gives the
//! complex Hadamard matrix `I + iC`; a skew one gives the real Hadamard
//! matrix `I - C`. Dephasing `I + iC` yields a symmetric matrix `D` whose
//! core has `-1` on the diagonal and `+-i` elsewhere; affine parameters can
//! then be introduced on "suitable" row pairs of `D`, repeatedly, each new
//! parameter multiplying the sign-opposite entry pairs of its two rows (and
//! the matching columns, with opposite sign).

use serde::{Deserialize, Serialize};

use crate::equivalence::dephase;
use crate::error::{Error, Result};
use crate::matrix::{param_name, AffinePhaseMatrix, HadamardMatrix};
use crate::phase::{AffineEntry, LinearForm, RationalPhase};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConferenceMatrix {
    order: usize,
    entries: Vec<Vec<i64>>,
}

impl ConferenceMatrix {
    /// Validates the defining identity, the zero diagonal, and the sign
    /// entries.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let order = entries.len();
        if order < 2 || entries.iter().any(|r| r.len() != order) {
            return Err(Error::NotConference("must be square, order >= 2".into()));
        }
        for i in 0..order {
            for j in 0..order {
                let v = entries[i][j];
                if i == j && v != 0 {
                    return Err(Error::NotConference("diagonal must be zero".into()));
                }
                if i != j && v != 1 && v != -1 {
                    return Err(Error::NotConference(
                        "off-diagonal entries must be +1 or -1".into(),
                    ));
                }
            }
        }
        for i in 0..order {
            for j in i..order {
                let dot: i64 = (0..order).map(|k| entries[i][k] * entries[j][k]).sum();
                let target = if i == j { order as i64 - 1 } else { 0 };
                if dot != target {
                    return Err(Error::NotConference(format!(
                        "C C^T fails at rows {i}, {j}"
                    )));
                }
            }
        }
        Ok(ConferenceMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (i..self.order).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn is_skew(&self) -> bool {
        (0..self.order).all(|i| (i..self.order).all(|j| self.entries[i][j] == -self.entries[j][i]))
    }
}

#[derive(Serialize, Deserialize)]
struct ConferenceDto {
    order: usize,
    entries: Vec<Vec<i64>>,
}

pub fn conference_to_json(c: &ConferenceMatrix) -> String {
    let dto = ConferenceDto {
        order: c.order(),
        entries: c.entries.clone(),
    };
    serde_json::to_string_pretty(&dto).expect("conference serialization cannot fail")
}

pub fn conference_from_json(s: &str) -> Result<ConferenceMatrix> {
    let dto: ConferenceDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad conference JSON: {e}")))?;
    if dto.entries.len() != dto.order {
        return Err(Error::Parse("order does not match row count".into()));
    }
    ConferenceMatrix::new(dto.entries)
}

/// One row per line, whitespace-separated `-1` / `0` / `1` tokens.
pub fn conference_to_text(c: &ConferenceMatrix) -> String {
    let mut out = String::new();
    for row in &c.entries {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            if *v >= 0 {
                out.push(' ');
            }
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn conference_from_text(s: &str) -> Result<ConferenceMatrix> {
    let entries = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    "-1" => Ok(-1),
                    _ => Err(Error::Parse(format!("bad conference token {t:?}"))),
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    ConferenceMatrix::new(entries)
}

/// Necessary condition for a symmetric conference matrix of order `n` to
/// exist: `n = 2 (mod 4)` and `n - 1` a sum of two squares.
pub fn order_feasible(n: usize) -> bool {
    n % 4 == 2 && is_sum_of_two_squares(n - 1)
}

fn is_sum_of_two_squares(m: usize) -> bool {
    let mut a = 0;
    while a * a <= m {
        let rest = m - a * a;
        let b = (rest as f64).sqrt().round() as usize;
        if b * b == rest {
            return true;
        }
        a += 1;
    }
    false
}

/// The Paley conference matrix of order `q + 1` for an odd prime `q`:
/// the core is the quadratic-character table `chi(i - j)`, bordered by ones.
/// Symmetric for `q = 1 (mod 4)`, skew for `q = 3 (mod 4)`.
pub fn paley(q: u64) -> Result<ConferenceMatrix> {
    if q < 3 || q % 2 == 0 || !is_prime(q) {
        return Err(Error::NotOddPrime { q });
    }
    let n = q as usize + 1;
    let skew = q % 4 == 3;
    let mut m = vec![vec![0i64; n]; n];
    for j in 1..n {
        m[0][j] = 1;
        m[j][0] = if skew { -1 } else { 1 };
    }
    for i in 1..n {
        for j in 1..n {
            if i != j {
                let d = (i as i64 - j as i64).rem_euclid(q as i64) as u64;
                m[i][j] = legendre(d, q);
            }
        }
    }
    ConferenceMatrix::new(m)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Quadratic character of `a` mod the odd prime `q` (0 for `a = 0`).
fn legendre(a: u64, q: u64) -> i64 {
    if a % q == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a % q;
    let mut exp = (q - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Builds a Hadamard matrix from a conference matrix: `I + iC` when `C` is
/// symmetric (entries are fourth roots of unity), `I - C` when skew (real).
pub fn to_hadamard(c: &ConferenceMatrix) -> Result<HadamardMatrix> {
    let n = c.order();
    let phase_of = |v: i64| -> RationalPhase {
        match v {
            1 => RationalPhase::QUARTER,
            -1 => RationalPhase::THREE_QUARTERS,
            _ => RationalPhase::ZERO,
        }
    };
    let entries: Vec<Vec<RationalPhase>> = if c.is_symmetric() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            RationalPhase::ZERO
                        } else {
                            phase_of(c.entry(i, j))
                        }
                    })
                    .collect()
            })
            .collect()
    } else if c.is_skew() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j || c.entry(i, j) == -1 {
                            RationalPhase::ZERO
                        } else {
                            RationalPhase::HALF
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        return Err(Error::NotConference(
            "need a symmetric or skew conference matrix".into(),
        ));
    };
    let h = HadamardMatrix::new(entries)?;
    debug_assert!(h.is_hadamard());
    Ok(h)
}

/// Dephased form of `I + iC` for symmetric `C`. The result is symmetric and
/// dephased, with `-1` on the core diagonal and `+-i` elsewhere in the core:
/// the standard starting point for introducing affine parameters.
pub fn dephased_form(c: &ConferenceMatrix) -> Result<HadamardMatrix> {
    if !c.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (d, _) = dephase(&to_hadamard(c)?);
    Ok(d)
}

const BARE_MINUS_ONE: RationalPhase = RationalPhase::HALF;

fn is_bare_minus_one(e: &AffineEntry) -> bool {
    e.base == BARE_MINUS_ONE && e.form.is_zero()
}

fn affine_equal(a: &AffineEntry, b: &AffineEntry) -> bool {
    a == b
}

fn affine_opposite(a: &AffineEntry, b: &AffineEntry) -> bool {
    a.base - b.base == RationalPhase::HALF && a.form == b.form
}

/// Fresh quarter-phase pair: `(i, -i)` or `(-i, i)` with no parameters yet.
fn fresh_opposite(a: &AffineEntry, b: &AffineEntry) -> bool {
    a.form.is_zero()
        && b.form.is_zero()
        && ((a.base == RationalPhase::QUARTER && b.base == RationalPhase::THREE_QUARTERS)
            || (a.base == RationalPhase::THREE_QUARTERS && b.base == RationalPhase::QUARTER))
}

/// Why a row pair cannot take a new parameter, if it cannot.
fn unsuitable_reason(f: &AffinePhaseMatrix, r: usize, s: usize) -> Option<String> {
    let n = f.order();
    for k in 0..n {
        let (a, b) = (f.entry(r, k), f.entry(s, k));
        if is_bare_minus_one(a) || is_bare_minus_one(b) {
            continue;
        }
        if !affine_equal(a, b) && !affine_opposite(a, b) && !affine_opposite(b, a) {
            return Some(format!("column {k} (0-based) is neither equal nor opposite"));
        }
    }
    if !(0..n).any(|k| fresh_opposite(f.entry(r, k), f.entry(s, k))) {
        return Some("no parameter-free (i,-i) column pair".into());
    }
    None
}

pub fn is_suitable_pair(f: &AffinePhaseMatrix, r: usize, s: usize) -> bool {
    unsuitable_reason(f, r, s).is_none()
}

/// All row pairs `(r, s)`, `1 <= r < s < N`, suitable for a new parameter.
/// The all-ones first row never takes part.
pub fn find_suitable_pairs(f: &AffinePhaseMatrix) -> Vec<(usize, usize)> {
    let n = f.order();
    let mut out = Vec::new();
    for r in 1..n {
        for s in r + 1..n {
            if is_suitable_pair(f, r, s) {
                out.push((r, s));
            }
        }
    }
    out
}

/// Introduces one new free parameter on the row pair `(r, s)`:
/// sign-opposite entry pairs of rows `r` and `s` pick up `+t`, those of
/// columns `r` and `s` pick up `-t` (pairs containing a bare `-1` are left
/// alone). The extended family is re-verified before being returned.
pub fn add_pair_parameter(
    f: &AffinePhaseMatrix,
    r: usize,
    s: usize,
    name: &str,
) -> Result<AffinePhaseMatrix> {
    let n = f.order();
    if r == s || r == 0 || s == 0 || r >= n || s >= n {
        return Err(Error::Argument(format!(
            "rows ({r}, {s}) out of range for a pair parameter"
        )));
    }
    if let Some(reason) = unsuitable_reason(f, r, s) {
        return Err(Error::UnsuitablePair { r, s, reason });
    }

    let p = f.param_count();
    let mut params = f.params().to_vec();
    params.push(name.to_string());

    // Extend every coefficient vector by a zero slot for the new parameter.
    let mut entries: Vec<Vec<AffineEntry>> = f
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let mut coeffs = e.form.coeffs().to_vec();
                    coeffs.push(0);
                    AffineEntry {
                        base: e.base,
                        form: LinearForm::from_coeffs(coeffs),
                    }
                })
                .collect()
        })
        .collect();

    let exempt = |a: &AffineEntry, b: &AffineEntry| is_bare_minus_one(a) || is_bare_minus_one(b);
    let opposite =
        |a: &AffineEntry, b: &AffineEntry| affine_opposite(a, b) || affine_opposite(b, a);

    for k in 0..n {
        let (a, b) = (f.entry(r, k), f.entry(s, k));
        if !exempt(a, b) && opposite(a, b) {
            entries[r][k].form.add_at(p, 1);
            entries[s][k].form.add_at(p, 1);
        }
    }
    for m in 0..n {
        let (a, b) = (f.entry(m, r), f.entry(m, s));
        if !exempt(a, b) && opposite(a, b) {
            entries[m][r].form.add_at(p, -1);
            entries[m][s].form.add_at(p, -1);
        }
    }

    let out = AffinePhaseMatrix::new(params, entries)?;
    if let Err(fail) = out.check_family() {
        return Err(Error::FamilyNotHadamard {
            i: fail.row_i,
            j: fail.row_j,
        });
    }
    Ok(out)
}

/// Builds an affine family over a dephased symmetric Hadamard matrix by
/// repeatedly introducing pair parameters.
///
/// With a script, the given row pairs are used in order and each must be
/// suitable at its step. Without one, the lexicographically first suitable
/// pair is taken until none remains. Every intermediate family is verified.
pub fn build_affine_family(
    d: &HadamardMatrix,
    script: Option<&[(usize, usize)]>,
) -> Result<AffinePhaseMatrix> {
    d.verify_hadamard()?;
    if !d.is_dephased() {
        return Err(Error::NotDephased);
    }
    if *d != d.transposed() {
        return Err(Error::NotSymmetric);
    }
    let mut f = d.as_family(vec![]);
    match script {
        Some(pairs) => {
            for (step, &(r, s)) in pairs.iter().enumerate() {
                f = add_pair_parameter(&f, r, s, &param_name(step))?;
            }
        }
        None => loop {
            let pairs = find_suitable_pairs(&f);
            let Some(&(r, s)) = pairs.first() else { break };
            let step = f.param_count();
            f = add_pair_parameter(&f, r, s, &param_name(step))?;
        },
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_table() {
        for n in [2usize, 6, 10, 14, 18, 26, 30, 38, 42, 46] {
            assert!(order_feasible(n), "{n} should be feasible");
        }
        // 21 = 3 * 7 and 33 = 3 * 11 are not sums of two squares.
        for n in [22usize, 34] {
            assert!(!order_feasible(n), "{n} should be infeasible");
        }
        // Wrong residue class.
        for n in [4usize, 8, 12, 16, 5, 7] {
            assert!(!order_feasible(n), "{n} should be infeasible");
        }
    }

    #[test]
    fn paley_small_orders() {
        let c6 = paley(5).unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.is_symmetric());
        let c12 = paley(11).unwrap();
        assert_eq!(c12.order(), 12);
        assert!(c12.is_skew());
        let c14 = paley(13).unwrap();
        assert_eq!(c14.order(), 14);
        assert!(c14.is_symmetric());
        let c18 = paley(17).unwrap();
        assert_eq!(c18.order(), 18);
        assert!(c18.is_symmetric());
    }

    #[test]
    fn paley_rejects_non_primes() {
        for q in [1u64, 2, 4, 9, 15, 21] {
            assert!(matches!(paley(q), Err(Error::NotOddPrime { .. })), "q={q}");
        }
    }

    #[test]
    fn conference_identity_is_validated() {
        // Breaking one sign of a Paley matrix must be caught.
        let c = paley(5).unwrap();
        let mut bad = c.rows().to_vec();
        bad[2][3] = -bad[2][3];
        assert!(ConferenceMatrix::new(bad).is_err());
    }

    #[test]
    fn symmetric_conference_gives_quarter_phase_hadamard() {
        let c = paley(13).unwrap();
        let h = to_hadamard(&c).unwrap();
        assert!(h.is_hadamard());
        assert!(h.is_quarter_phase());
        assert!(!h.is_real());
    }

    #[test]
    fn skew_conference_gives_real_hadamard() {
        let c = paley(11).unwrap();
        let h = to_hadamard(&c).unwrap();
        assert!(h.is_hadamard());
        assert!(h.is_real());
    }

    #[test]
    fn dephased_form_structure() {
        let d = dephased_form(&paley(5).unwrap()).unwrap();
        assert!(d.is_hadamard());
        assert!(d.is_dephased());
        assert_eq!(d, d.transposed());
        for i in 1..6 {
            for j in 1..6 {
                let q = d.phase(i, j);
                if i == j {
                    assert_eq!(q, RationalPhase::HALF);
                } else {
                    assert!(
                        q == RationalPhase::QUARTER || q == RationalPhase::THREE_QUARTERS,
                        "core off-diagonal must be +-i, got {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_pair_parameter_on_order_six() {
        let d = dephased_form(&paley(5).unwrap()).unwrap();
        let f = d.as_family(vec![]);
        assert!(is_suitable_pair(&f, 1, 2));
        let fam = add_pair_parameter(&f, 1, 2, "t").unwrap();
        assert_eq!(fam.param_count(), 1);
        assert!(fam.is_hadamard_family());
        assert_eq!(fam.base(), d);
        // The witness (i,-i) column of the pair now carries the parameter.
        let parametrized = (0..6).any(|k| {
            !fam.entry(1, k).form.is_zero() && !fam.entry(2, k).form.is_zero()
        });
        assert!(parametrized);
    }

    #[test]
    fn greedy_order_six_family_has_one_parameter() {
        let d = dephased_form(&paley(5).unwrap()).unwrap();
        let fam = build_affine_family(&d, None).unwrap();
        assert_eq!(fam.param_count(), 1);
        assert!(fam.is_hadamard_family());
        // Condition (ii) fails everywhere afterwards.
        assert!(find_suitable_pairs(&fam).is_empty());
    }

    #[test]
    fn build_rejects_bad_starting_points() {
        // Not dephased.
        let h = to_hadamard(&paley(5).unwrap()).unwrap();
        assert!(matches!(
            build_affine_family(&h, None),
            Err(Error::NotDephased)
        ));
        // Dephased but not symmetric: the real order-12 matrix from the skew
        // Paley construction, dephased.
        let h12 = to_hadamard(&paley(11).unwrap()).unwrap();
        let (d12, _) = dephase(&h12);
        assert!(matches!(
            build_affine_family(&d12, None),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn conference_json_round_trip() {
        let c = paley(13).unwrap();
        let json = conference_to_json(&c);
        assert_eq!(conference_from_json(&json).unwrap(), c);
    }
}
