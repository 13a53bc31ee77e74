//! Input resolution: a matrix, family, or conference matrix from a file,
//! stdin, the catalogue, or the Paley generator.

use std::io::Read;
use std::path::PathBuf;

use clap::Args;

use chm_core::catalogue::{self, CatalogueObject};
use chm_core::conference::{self, ConferenceMatrix};
use chm_core::{io, AffinePhaseMatrix, HadamardMatrix};

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Matrix or family file, JSON or text; `-` reads stdin
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Catalogue entry id such as H12 or D10_3
    #[arg(long, value_name = "ID")]
    pub catalogue: Option<String>,
}

/// Like [`Source`], with the Paley generator as a third origin.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct ConferenceSource {
    /// Conference matrix file, JSON or text grid; `-` reads stdin
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Catalogue entry id such as C6, or a dephased matrix like D10
    #[arg(long, value_name = "ID")]
    pub catalogue: Option<String>,
    /// Generate the Paley conference matrix of order q+1
    #[arg(long, value_name = "Q")]
    pub paley: Option<u64>,
}

pub enum Object {
    Matrix(HadamardMatrix),
    Family(AffinePhaseMatrix),
    Conference(ConferenceMatrix),
}

pub fn load(source: &Source) -> Result<Object, String> {
    if let Some(id) = &source.catalogue {
        let entry = catalogue::get(id).map_err(|e| e.to_string())?;
        return Ok(match entry.object {
            CatalogueObject::Matrix(h) => Object::Matrix(h),
            CatalogueObject::Family(f) => Object::Family(f),
            CatalogueObject::Conference(c) => Object::Conference(c),
        });
    }
    let path = source.file.as_ref().expect("clap enforces one source");
    parse_object(&read_input(path)?)
}

pub fn load_conference(source: &ConferenceSource) -> Result<Object, String> {
    if let Some(q) = source.paley {
        let c = conference::paley(q).map_err(|e| e.to_string())?;
        return Ok(Object::Conference(c));
    }
    load(&Source {
        file: source.file.clone(),
        catalogue: source.catalogue.clone(),
    })
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

/// A parameter-free family is handed back as a plain matrix.
fn wrap(f: AffinePhaseMatrix) -> Object {
    if f.param_count() == 0 {
        Object::Matrix(f.base())
    } else {
        Object::Family(f)
    }
}

fn parse_object(text: &str) -> Result<Object, String> {
    if text.trim_start().starts_with('{') {
        match io::family_from_json(text) {
            Ok(f) => Ok(wrap(f)),
            Err(m) => match conference::conference_from_json(text) {
                Ok(c) => Ok(Object::Conference(c)),
                Err(c) => Err(format!("{m}; as a conference matrix: {c}")),
            },
        }
    } else {
        match io::family_from_text(text) {
            Ok(f) => Ok(wrap(f)),
            Err(m) => match conference::conference_from_text(text) {
                Ok(c) => Ok(Object::Conference(c)),
                Err(c) => Err(format!("{m}; as a conference matrix: {c}")),
            },
        }
    }
}
