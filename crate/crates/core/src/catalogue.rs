//! Built-in matrices and families.
//!
//! The transcribed fixtures live as text files next to this module and are
//! re-verified on every load, so a transcription typo cannot survive the test
//! suite. Generated entries (Fourier matrices, Kronecker powers, Paley
//! conference matrices) come from their defining formulas.

use crate::conference::{paley, ConferenceMatrix};
use crate::error::{Error, Result};
use crate::io;
use crate::matrix::{AffinePhaseMatrix, HadamardMatrix};

const H12_TXT: &str = include_str!("data/h12.txt");
const H12_7_TXT: &str = include_str!("data/h12_7.txt");
const D10_TXT: &str = include_str!("data/d10.txt");
const D10_3_TXT: &str = include_str!("data/d10_3.txt");
const D14_TXT: &str = include_str!("data/d14.txt");
const D14_6_TXT: &str = include_str!("data/d14_6.txt");

/// Orders past this would overflow the exact verification machinery, which
/// reduces root sums modulo the cyclotomic polynomial of the common order.
pub const MAX_FOURIER_ORDER: usize = 360;

#[derive(Clone, Debug)]
pub enum CatalogueObject {
    Matrix(HadamardMatrix),
    Family(AffinePhaseMatrix),
    Conference(ConferenceMatrix),
}

impl CatalogueObject {
    pub fn order(&self) -> usize {
        match self {
            CatalogueObject::Matrix(h) => h.order(),
            CatalogueObject::Family(f) => f.order(),
            CatalogueObject::Conference(c) => c.order(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CatalogueObject::Matrix(_) => "matrix",
            CatalogueObject::Family(_) => "family",
            CatalogueObject::Conference(_) => "conference",
        }
    }

    pub fn as_matrix(&self) -> Option<&HadamardMatrix> {
        match self {
            CatalogueObject::Matrix(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_family(&self) -> Option<&AffinePhaseMatrix> {
        match self {
            CatalogueObject::Family(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_conference(&self) -> Option<&ConferenceMatrix> {
        match self {
            CatalogueObject::Conference(c) => Some(c),
            _ => None,
        }
    }

    /// The catalogue object viewed as a phase matrix: families keep their
    /// parameters, plain matrices get arity zero, conference matrices are
    /// converted through `I + iC` (symmetric) or `I - C` (skew).
    pub fn as_phase_matrix(&self) -> Result<AffinePhaseMatrix> {
        match self {
            CatalogueObject::Matrix(h) => Ok(h.as_family(Vec::new())),
            CatalogueObject::Family(f) => Ok(f.clone()),
            CatalogueObject::Conference(c) => {
                Ok(crate::conference::to_hadamard(c)?.as_family(Vec::new()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub id: String,
    pub provenance: String,
    pub object: CatalogueObject,
}

fn load_matrix(id: &str, text: &str, provenance: &str) -> Result<CatalogueEntry> {
    let h = io::matrix_from_text(text)?;
    h.verify_hadamard()
        .map_err(|e| Error::Parse(format!("catalogue fixture {id} failed verification: {e}")))?;
    Ok(CatalogueEntry {
        id: id.into(),
        provenance: provenance.into(),
        object: CatalogueObject::Matrix(h),
    })
}

fn load_family(id: &str, text: &str, provenance: &str) -> Result<CatalogueEntry> {
    let f = io::family_from_text(text)?;
    if let Err(fail) = f.check_family() {
        return Err(Error::Parse(format!(
            "catalogue fixture {id} failed verification: rows {} and {} leave a nonvanishing sum",
            fail.row_i, fail.row_j
        )));
    }
    Ok(CatalogueEntry {
        id: id.into(),
        provenance: provenance.into(),
        object: CatalogueObject::Family(f),
    })
}

fn tensor_power_of_f2(k: u32, id: &str) -> CatalogueEntry {
    let f2 = HadamardMatrix::fourier(2).unwrap();
    let mut h = f2.clone();
    for _ in 1..k {
        h = HadamardMatrix::tensor_product(&h, &f2);
    }
    CatalogueEntry {
        id: id.into(),
        provenance: format!("Kronecker power F2^({k}), the real Hadamard matrix of order {}", h.order()),
        object: CatalogueObject::Matrix(h),
    }
}

fn paley_entry(q: u64, id: &str) -> CatalogueEntry {
    let c = paley(q).unwrap();
    CatalogueEntry {
        id: id.into(),
        provenance: format!(
            "symmetric conference matrix of order {} built from quadratic residues mod {q}",
            c.order()
        ),
        object: CatalogueObject::Conference(c),
    }
}

/// Looks up a catalogue entry by id (case-insensitive).
///
/// Known ids: the transcribed fixtures `H12`, `H12_7`, `D10`, `D10_3`, `D14`,
/// `D14_6`; the generated matrices `H4`, `H8`, `H16` (Kronecker powers of F2),
/// `C6`, `C14` (Paley conference matrices), and `F{N}` for any N up to
/// [`MAX_FOURIER_ORDER`].
pub fn get(id: &str) -> Result<CatalogueEntry> {
    let key = id.trim().to_ascii_uppercase();
    match key.as_str() {
        "H12" => load_matrix(
            "H12",
            H12_TXT,
            "real Hadamard matrix of order 12, unique up to equivalence",
        ),
        "H12_7" => load_family(
            "H12_7",
            H12_7_TXT,
            "seven-parameter affine family through the order-12 real Hadamard matrix",
        ),
        "D10" => load_matrix(
            "D10",
            D10_TXT,
            "symmetric quarter-phase Hadamard matrix of order 10 from the Paley conference matrix",
        ),
        "D10_3" => load_family(
            "D10_3",
            D10_3_TXT,
            "three-parameter affine family through the order-10 conference-derived matrix",
        ),
        "D14" => load_matrix(
            "D14",
            D14_TXT,
            "symmetric quarter-phase Hadamard matrix of order 14 from the Paley conference matrix",
        ),
        "D14_6" => load_family(
            "D14_6",
            D14_6_TXT,
            "six-parameter affine family through the order-14 conference-derived matrix",
        ),
        "H4" => Ok(tensor_power_of_f2(2, "H4")),
        "H8" => Ok(tensor_power_of_f2(3, "H8")),
        "H16" => Ok(tensor_power_of_f2(4, "H16")),
        "C6" => Ok(paley_entry(5, "C6")),
        "C14" => Ok(paley_entry(13, "C14")),
        _ => {
            if let Some(digits) = key.strip_prefix('F') {
                if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                    let n: usize = digits
                        .parse()
                        .map_err(|_| Error::UnknownCatalogueId(id.into()))?;
                    if n == 0 {
                        return Err(Error::Argument("Fourier order must be positive".into()));
                    }
                    if n > MAX_FOURIER_ORDER {
                        return Err(Error::Argument(format!(
                            "Fourier orders above {MAX_FOURIER_ORDER} exceed the exact verification bound"
                        )));
                    }
                    return Ok(CatalogueEntry {
                        id: format!("F{n}"),
                        provenance: format!("Fourier matrix of order {n}"),
                        object: CatalogueObject::Matrix(HadamardMatrix::fourier(n)?),
                    });
                }
            }
            Err(Error::UnknownCatalogueId(id.into()))
        }
    }
}

/// All named ids with their provenance strings. `F{N}` is accepted by [`get`]
/// for any N up to [`MAX_FOURIER_ORDER`]; only small representatives appear
/// here.
pub fn list() -> Vec<(String, String)> {
    let ids = [
        "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F12", "H4", "H8", "H12", "H12_7", "H16",
        "C6", "C14", "D10", "D10_3", "D14", "D14_6",
    ];
    ids.iter()
        .map(|id| {
            let e = get(id).expect("listed catalogue ids always load");
            (e.id, e.provenance)
        })
        .collect()
}
