//! Serialization: JSON objects and a plain-text grid format.
//!
//! JSON schema for matrices and families:
//! `{"order": N, "params": ["a", ...], "entries": [[{"base": "p/q",
//! "coeffs": [..]}, ...], ...]}`. A parameter-free matrix has `params: []`
//! and empty coefficient lists.
//!
//! The text format is one matrix row per line, whitespace-separated tokens
//! `1`, `-1`, `i`, `-i`, or `w^{p/q}`, each optionally carrying a factor
//! `*exp(i*(a-b+2c))`; a family starts with a `params: a b c` header line.
//! Parsing and printing are mutually inverse.

use serde::{Deserialize, Serialize};

use crate::equivalence::EquivalenceOp;
use crate::error::{Error, Result};
use crate::matrix::{AffinePhaseMatrix, HadamardMatrix};
use crate::phase::{AffineEntry, LinearForm, RationalPhase};

#[derive(Serialize, Deserialize)]
struct EntryDto {
    base: String,
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    order: usize,
    params: Vec<String>,
    entries: Vec<Vec<EntryDto>>,
}

#[derive(Serialize, Deserialize)]
struct OpDto {
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    left: Vec<String>,
    right: Vec<String>,
}

pub fn family_to_json(f: &AffinePhaseMatrix) -> String {
    let dto = MatrixDto {
        order: f.order(),
        params: f.params().to_vec(),
        entries: f
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| EntryDto {
                        base: e.base.to_string(),
                        coeffs: e.form.coeffs().to_vec(),
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("matrix serialization cannot fail")
}

pub fn family_from_json(s: &str) -> Result<AffinePhaseMatrix> {
    let dto: MatrixDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad matrix JSON: {e}")))?;
    check_params(&dto.params)?;
    if dto.entries.len() != dto.order {
        return Err(Error::Parse("order does not match row count".into()));
    }
    let arity = dto.params.len();
    let mut rows = Vec::with_capacity(dto.order);
    for r in &dto.entries {
        let mut row = Vec::with_capacity(dto.order);
        for e in r {
            if e.coeffs.len() != arity {
                return Err(Error::Parse(
                    "coefficient vector length does not match params".into(),
                ));
            }
            row.push(AffineEntry {
                base: e.base.parse()?,
                form: LinearForm::from_coeffs(e.coeffs.clone()),
            });
        }
        rows.push(row);
    }
    AffinePhaseMatrix::new(dto.params, rows)
}

pub fn matrix_to_json(h: &HadamardMatrix) -> String {
    family_to_json(&h.as_family(vec![]))
}

pub fn matrix_from_json(s: &str) -> Result<HadamardMatrix> {
    let f = family_from_json(s)?;
    if f.param_count() != 0 {
        return Err(Error::Parse(
            "expected a parameter-free matrix, got a family".into(),
        ));
    }
    Ok(f.base())
}

pub fn op_to_json(op: &EquivalenceOp) -> String {
    let dto = OpDto {
        row_perm: op.row_perm.clone(),
        col_perm: op.col_perm.clone(),
        left: op.left.iter().map(|q| q.to_string()).collect(),
        right: op.right.iter().map(|q| q.to_string()).collect(),
    };
    serde_json::to_string_pretty(&dto).expect("op serialization cannot fail")
}

pub fn op_from_json(s: &str) -> Result<EquivalenceOp> {
    let dto: OpDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad op JSON: {e}")))?;
    let parse_all = |v: &[String]| -> Result<Vec<RationalPhase>> {
        v.iter().map(|s| s.parse()).collect()
    };
    Ok(EquivalenceOp {
        row_perm: dto.row_perm,
        col_perm: dto.col_perm,
        left: parse_all(&dto.left)?,
        right: parse_all(&dto.right)?,
    })
}

fn check_params(params: &[String]) -> Result<()> {
    for (i, p) in params.iter().enumerate() {
        let mut chars = p.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::Parse(format!("bad parameter name {p:?}")));
        }
        if params[..i].contains(p) {
            return Err(Error::Parse(format!("duplicate parameter name {p:?}")));
        }
    }
    Ok(())
}

fn base_token(q: RationalPhase) -> String {
    if q.is_zero() {
        "1".into()
    } else if q == RationalPhase::HALF {
        "-1".into()
    } else if q == RationalPhase::QUARTER {
        "i".into()
    } else if q == RationalPhase::THREE_QUARTERS {
        "-i".into()
    } else {
        format!("w^{{{q}}}")
    }
}

fn form_token(form: &LinearForm, names: &[String]) -> String {
    let mut s = String::new();
    for (idx, &c) in form.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push(if c < 0 { '-' } else { '+' });
        }
        let a = c.unsigned_abs();
        if a != 1 {
            s.push_str(&a.to_string());
        }
        s.push_str(&names[idx]);
    }
    s
}

fn entry_token(e: &AffineEntry, names: &[String]) -> String {
    let base = base_token(e.base);
    if e.form.is_zero() {
        base
    } else {
        format!("{base}*exp(i*({}))", form_token(&e.form, names))
    }
}

pub fn family_to_text(f: &AffinePhaseMatrix) -> String {
    let names = f.params();
    let tokens: Vec<Vec<String>> = f
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| entry_token(e, names)).collect())
        .collect();
    let n = f.order();
    let widths: Vec<usize> = (0..n)
        .map(|j| tokens.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    if !names.is_empty() {
        out.push_str("params:");
        for p in names {
            out.push(' ');
            out.push_str(p);
        }
        out.push('\n');
    }
    for row in &tokens {
        for (j, t) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            // Last column unpadded keeps lines tidy.
            if j + 1 < row.len() {
                out.push_str(&format!("{t:<w$}", w = widths[j]));
            } else {
                out.push_str(t);
            }
        }
        out.push('\n');
    }
    out
}

pub fn matrix_to_text(h: &HadamardMatrix) -> String {
    family_to_text(&h.as_family(vec![]))
}

pub fn family_from_text(s: &str) -> Result<AffinePhaseMatrix> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .peekable();
    let params: Vec<String> = match lines.peek() {
        Some(l) if l.starts_with("params:") => {
            let l = lines.next().unwrap();
            l["params:".len()..]
                .split_whitespace()
                .map(|p| p.to_string())
                .collect()
        }
        _ => vec![],
    };
    check_params(&params)?;
    let mut rows: Vec<Vec<AffineEntry>> = Vec::new();
    for line in lines {
        let row = line
            .split_whitespace()
            .map(|t| parse_entry_token(t, &params))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    AffinePhaseMatrix::new(params, rows)
}

pub fn matrix_from_text(s: &str) -> Result<HadamardMatrix> {
    let f = family_from_text(s)?;
    if f.param_count() != 0 {
        return Err(Error::Parse(
            "expected a parameter-free matrix, got a family".into(),
        ));
    }
    Ok(f.base())
}

fn parse_entry_token(t: &str, params: &[String]) -> Result<AffineEntry> {
    let (base_str, form_str) = match t.split_once("*exp(i*(") {
        Some((b, rest)) => {
            let inner = rest
                .strip_suffix("))")
                .ok_or_else(|| Error::Parse(format!("bad entry token {t:?}")))?;
            (b, Some(inner))
        }
        None => (t, None),
    };
    let base = parse_base_token(base_str)?;
    let form = match form_str {
        Some(fs) => parse_form(fs, params)?,
        None => LinearForm::zero(params.len()),
    };
    Ok(AffineEntry { base, form })
}

fn parse_base_token(s: &str) -> Result<RationalPhase> {
    match s {
        "1" => Ok(RationalPhase::ZERO),
        "-1" => Ok(RationalPhase::HALF),
        "i" => Ok(RationalPhase::QUARTER),
        "-i" => Ok(RationalPhase::THREE_QUARTERS),
        _ => {
            let inner = s
                .strip_prefix("w^{")
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| Error::Parse(format!("bad base token {s:?}")))?;
            inner.parse()
        }
    }
}

fn parse_form(s: &str, params: &[String]) -> Result<LinearForm> {
    let bad = || Error::Parse(format!("bad linear form {s:?}"));
    let mut form = LinearForm::zero(params.len());
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let sign = match chars[i] {
            '+' => {
                i += 1;
                1
            }
            '-' => {
                i += 1;
                -1
            }
            _ if first => 1,
            _ => return Err(bad()),
        };
        let digits_start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if i == digits_start {
            1
        } else {
            chars[digits_start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| bad())?
        };
        let id_start = i;
        if i >= chars.len() || !chars[i].is_ascii_alphabetic() {
            return Err(bad());
        }
        while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        let name: String = chars[id_start..i].iter().collect();
        let idx = params
            .iter()
            .position(|p| *p == name)
            .ok_or_else(|| Error::Parse(format!("unknown parameter {name:?}")))?;
        form.add_at(idx, sign * coeff);
        first = false;
    }
    if first {
        return Err(bad());
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> RationalPhase {
        RationalPhase::new(n, d).unwrap()
    }

    fn sample_family() -> AffinePhaseMatrix {
        let names = vec!["a".to_string(), "b".to_string()];
        let e = |n: i64, d: i64, ca: i64, cb: i64| AffineEntry {
            base: q(n, d),
            form: LinearForm::from_coeffs(vec![ca, cb]),
        };
        AffinePhaseMatrix::new(
            names,
            vec![
                vec![e(0, 1, 0, 0), e(0, 1, 0, 0), e(0, 1, 0, 0)],
                vec![e(0, 1, 0, 0), e(1, 3, 1, -1), e(2, 3, -2, 0)],
                vec![e(0, 1, 0, 0), e(2, 3, 0, 3), e(1, 3, 1, 1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn text_tokens() {
        let f = sample_family();
        let text = family_to_text(&f);
        assert!(text.starts_with("params: a b\n"));
        assert!(text.contains("w^{1/3}*exp(i*(a-b))"));
        assert!(text.contains("w^{2/3}*exp(i*(-2a))"));
        assert!(text.contains("w^{2/3}*exp(i*(3b))"));
        assert!(text.contains("w^{1/3}*exp(i*(a+b))"));
    }

    #[test]
    fn text_round_trip() {
        let f = sample_family();
        assert_eq!(family_from_text(&family_to_text(&f)).unwrap(), f);
        let h = HadamardMatrix::fourier(12).unwrap();
        assert_eq!(matrix_from_text(&matrix_to_text(&h)).unwrap(), h);
    }

    #[test]
    fn json_round_trip() {
        let f = sample_family();
        assert_eq!(family_from_json(&family_to_json(&f)).unwrap(), f);
        let h = HadamardMatrix::fourier(7).unwrap();
        assert_eq!(matrix_from_json(&matrix_to_json(&h)).unwrap(), h);
        // A family is not accepted where a plain matrix is required.
        assert!(matrix_from_json(&family_to_json(&f)).is_err());
    }

    #[test]
    fn op_json_round_trip() {
        let op = EquivalenceOp {
            row_perm: vec![1, 0, 2],
            col_perm: vec![2, 1, 0],
            left: vec![q(1, 4), q(0, 1), q(5, 6)],
            right: vec![q(1, 2), q(1, 3), q(0, 1)],
        };
        assert_eq!(op_from_json(&op_to_json(&op)).unwrap(), op);
    }

    #[test]
    fn quarter_phases_use_short_tokens() {
        let h = HadamardMatrix::new(vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(1, 4), q(3, 4)],
        ])
        .unwrap();
        let text = matrix_to_text(&h);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), ["1", "1"]);
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["i", "-i"]);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(family_from_text("1 1\n1").is_err());
        assert!(family_from_text("params: a a\n1 1\n1 1").is_err());
        assert!(family_from_text("params: 2x\n1 1\n1 1").is_err());
        assert!(family_from_text("q 1\n1 1").is_err());
        assert!(family_from_text("1 1\n1 1*exp(i*(a))").is_err());
        assert!(family_from_text("params: a\n1 1\n1 1*exp(i*(a)").is_err());
        assert!(family_from_text("params: a\n1 1\n1 1*exp(i*())").is_err());
        assert!(family_from_text("params: a\n1 1\n1 w^{}").is_err());
    }

    #[test]
    fn form_parsing_details() {
        let params: Vec<String> = vec!["a".into(), "b".into(), "x_1".into()];
        let f = parse_form("a-b+2x_1", &params).unwrap();
        assert_eq!(f.coeffs(), &[1, -1, 2]);
        let f = parse_form("-3a", &params).unwrap();
        assert_eq!(f.coeffs(), &[-3, 0, 0]);
        let f = parse_form("+b", &params).unwrap();
        assert_eq!(f.coeffs(), &[0, 1, 0]);
        assert!(parse_form("ab-", &params).is_err());
        assert!(parse_form("2", &params).is_err());
        assert!(parse_form("c", &params).is_err());
    }
}
