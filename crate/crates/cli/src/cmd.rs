//! One handler per subcommand. Each prints a JSON report (or the requested
//! object) on stdout, a one-line summary on stderr, and returns the exit
//! code; operational failures come back as `Err` and exit with 2.

use serde_json::{json, Map, Value};

use chm_core::affine::{find_pair_patterns, parametrize_pair, parametrize_real, family_dimension};
use chm_core::catalogue::{self, CatalogueObject};
use chm_core::conference;
use chm_core::dita::{core_scan, dita_detect, no_orthogonal_extension, CoreScan, DitaVerdict};
use chm_core::equivalence::{dephase, dephase_family};
use chm_core::invariants::{defect, haagerup_set};
use chm_core::matrix::Evaluated;
use chm_core::{io, AffinePhaseMatrix, Error};

use crate::input::Object;
use crate::{OutputFormat, EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK};

pub type CmdResult = Result<u8, String>;

const SCHEMA: &str = "chm-report/1";

/// Gram tolerance for numeric family evaluations.
const EVAL_TOL: f64 = 1e-9;

fn emit(command: &str, fields: Map<String, Value>) {
    let mut report = Map::new();
    report.insert("schema".into(), SCHEMA.into());
    report.insert("command".into(), command.into());
    report.extend(fields);
    println!("{}", serde_json::to_string_pretty(&Value::Object(report)).unwrap());
}

fn fields(pairs: Value) -> Map<String, Value> {
    match pairs {
        Value::Object(m) => m,
        _ => unreachable!("reports are built from json! objects"),
    }
}

fn print_object(obj: &Object, format: OutputFormat) {
    let out = match (obj, format) {
        (Object::Matrix(h), OutputFormat::Json) => io::matrix_to_json(h),
        (Object::Matrix(h), OutputFormat::Text) => io::matrix_to_text(h),
        (Object::Family(f), OutputFormat::Json) => io::family_to_json(f),
        (Object::Family(f), OutputFormat::Text) => io::family_to_text(f),
        (Object::Conference(c), OutputFormat::Json) => conference::conference_to_json(c),
        (Object::Conference(c), OutputFormat::Text) => conference::conference_to_text(c),
    };
    print!("{out}");
    if !out.ends_with('\n') {
        println!();
    }
}

fn one_based(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()
}

pub fn verify(obj: Object) -> CmdResult {
    verify_as("verify", obj)
}

fn verify_as(command: &str, obj: Object) -> CmdResult {
    match obj {
        Object::Matrix(h) => match h.verify_hadamard() {
            Ok(()) => {
                emit(command, fields(json!({
                    "object": "matrix", "order": h.order(), "hadamard": true,
                })));
                eprintln!("{0}x{0} matrix: Hadamard", h.order());
                Ok(EXIT_OK)
            }
            Err(Error::NotHadamard { i, j }) => {
                emit(command, fields(json!({
                    "object": "matrix", "order": h.order(), "hadamard": false,
                    "failing_rows": [i + 1, j + 1],
                })));
                eprintln!("not Hadamard: rows {} and {} are not orthogonal", i + 1, j + 1);
                Ok(EXIT_NEGATIVE)
            }
            Err(e) => Err(e.to_string()),
        },
        Object::Family(f) => match f.check_family() {
            Ok(()) => {
                emit(command, fields(json!({
                    "object": "family", "order": f.order(), "params": f.params(),
                    "hadamard": true,
                })));
                eprintln!(
                    "order-{} family in {} parameters: Hadamard for all parameter values",
                    f.order(),
                    f.param_count()
                );
                Ok(EXIT_OK)
            }
            Err(w) => {
                emit(command, fields(json!({
                    "object": "family", "order": f.order(), "params": f.params(),
                    "hadamard": false,
                    "failure": {
                        "rows": [w.row_i + 1, w.row_j + 1],
                        "coefficient_difference": w.diff,
                    },
                })));
                eprintln!(
                    "not a Hadamard family: rows {} and {} fail on the group with coefficient difference {:?}",
                    w.row_i + 1,
                    w.row_j + 1,
                    w.diff
                );
                Ok(EXIT_NEGATIVE)
            }
        },
        // Construction is the validation: an invalid grid never parses.
        Object::Conference(c) => {
            emit(command, fields(json!({
                "object": "conference", "order": c.order(), "conference": true,
                "symmetric": c.is_symmetric(), "skew": c.is_skew(),
            })));
            eprintln!("{0}x{0} conference matrix: C C^T = {1} I", c.order(), c.order() - 1);
            Ok(EXIT_OK)
        }
    }
}

pub fn dephase_cmd(obj: Object, format: OutputFormat) -> CmdResult {
    match obj {
        Object::Matrix(h) => {
            let (d, _) = dephase(&h);
            print_object(&Object::Matrix(d), format);
            eprintln!("dephased {0}x{0} matrix", h.order());
            Ok(EXIT_OK)
        }
        Object::Family(f) => {
            let d = dephase_family(&f);
            print_object(&Object::Family(d), format);
            eprintln!("dephased order-{} family", f.order());
            Ok(EXIT_OK)
        }
        Object::Conference(_) => Err("dephasing applies to matrices and families".into()),
    }
}

pub fn info(obj: Object) -> CmdResult {
    match obj {
        Object::Matrix(h) => {
            let hadamard = h.is_hadamard();
            let mut f = fields(json!({
                "object": "matrix", "order": h.order(), "hadamard": hadamard,
                "dephased": h.is_dephased(), "real": h.is_real(),
                "quarter_phase": h.is_quarter_phase(),
            }));
            if hadamard {
                let lambda: Vec<String> =
                    haagerup_set(&h).iter().map(|q| q.to_string()).collect();
                let d = defect(&h).map_err(|e| e.to_string())?;
                let scan = core_scan(&dephase(&h).0).map_err(|e| e.to_string())?;
                let dita = match scan {
                    CoreScan::NotDitaType => "not-dita (core has no 1)",
                    CoreScan::Inconclusive => "inconclusive (core has a 1; run dita-check)",
                };
                eprintln!(
                    "{0}x{0} Hadamard matrix; defect {1}{2}; Lambda has {3} phases; {4}",
                    h.order(),
                    d.defect,
                    if d.exact { " (exact)" } else { "" },
                    lambda.len(),
                    dita
                );
                f.extend(fields(json!({
                    "lambda": lambda,
                    "defect": d.defect, "defect_exact": d.exact,
                    "rank": d.rank, "unknowns": d.unknowns,
                    "dita": dita,
                })));
            } else {
                eprintln!("{0}x{0} matrix; not Hadamard", h.order());
            }
            emit("info", f);
            Ok(EXIT_OK)
        }
        Object::Family(f) => {
            let dim = family_dimension(&f);
            let base_defect = defect(&f.base()).ok().map(|d| d.defect);
            let mut out = fields(json!({
                "object": "family", "order": f.order(), "params": f.params(),
                "hadamard": f.is_hadamard_family(), "dimension": dim,
            }));
            if let Some(b) = base_defect {
                out.insert("base_defect".into(), b.into());
            }
            eprintln!(
                "order-{} family in {} parameters; dimension {}{}",
                f.order(),
                f.param_count(),
                dim,
                base_defect.map_or(String::new(), |b| format!(", base defect {b}"))
            );
            emit("info", out);
            Ok(EXIT_OK)
        }
        Object::Conference(c) => {
            emit("info", fields(json!({
                "object": "conference", "order": c.order(),
                "symmetric": c.is_symmetric(), "skew": c.is_skew(),
            })));
            eprintln!(
                "{0}x{0} {1} conference matrix",
                c.order(),
                if c.is_symmetric() { "symmetric" } else if c.is_skew() { "skew" } else { "general" }
            );
            Ok(EXIT_OK)
        }
    }
}

pub fn dita_check(obj: Object, budget: u64) -> CmdResult {
    let Object::Matrix(h) = obj else {
        return Err("dita-check needs a plain matrix".into());
    };
    match dita_detect(&h, budget) {
        DitaVerdict::Certificate(c) => {
            emit("dita-check", fields(json!({
                "verdict": "certificate", "nodes": c.nodes,
                "certificate": {
                    "n": c.n, "k": c.k, "transposed": c.transposed,
                    "column_partition": one_based(&c.column_partition),
                    "row_grouping": one_based(&c.row_grouping),
                },
            })));
            eprintln!(
                "Dita-type: {} column sets of size {}{} ({} nodes)",
                c.k,
                c.n,
                if c.transposed { ", on the transpose" } else { "" },
                c.nodes
            );
            Ok(EXIT_OK)
        }
        DitaVerdict::Refutation { cases, nodes, core_scan } => {
            emit("dita-check", fields(json!({
                "verdict": "refutation", "cases": cases, "nodes": nodes,
                "core_scan": core_scan,
            })));
            if core_scan {
                eprintln!("not Dita-type: the dephased core has no entry 1");
            } else {
                let shown: Vec<String> =
                    cases.iter().map(|(n, k)| format!("({n},{k})")).collect();
                eprintln!(
                    "not Dita-type: cases {} refuted ({} nodes)",
                    shown.join(" "),
                    nodes
                );
            }
            Ok(EXIT_NEGATIVE)
        }
        DitaVerdict::BudgetExhausted { cases, nodes } => {
            emit("dita-check", fields(json!({
                "verdict": "budget-exhausted", "cases": cases, "nodes": nodes,
            })));
            eprintln!("inconclusive: node budget exhausted after {nodes} nodes; raise --budget");
            Ok(EXIT_BUDGET)
        }
    }
}

pub fn lemma_l(p: usize) -> CmdResult {
    let holds = no_orthogonal_extension(p).map_err(|e| e.to_string())?;
    emit("lemma-l", fields(json!({
        "p": p, "row_length": 4 * p, "candidates": 1u64 << (4 * p), "holds": holds,
    })));
    if holds {
        eprintln!("no sign row of length {} is orthogonal to all four canonical rows", 4 * p);
        Ok(EXIT_OK)
    } else {
        eprintln!("found a sign row orthogonal to all four canonical rows");
        Ok(EXIT_NEGATIVE)
    }
}

pub fn param_real(obj: Object, format: OutputFormat) -> CmdResult {
    let Object::Matrix(h) = obj else {
        return Err("param real needs a plain matrix".into());
    };
    let f = parametrize_real(&h).map_err(|e| e.to_string())?;
    let dim = family_dimension(&f);
    print_object(&Object::Family(f.clone()), format);
    eprintln!(
        "affine family in {} parameters, dimension {}",
        f.param_count(),
        dim
    );
    Ok(EXIT_OK)
}

pub fn param_pair(obj: Object, cols: Option<(usize, usize)>, format: OutputFormat) -> CmdResult {
    let Object::Matrix(h) = obj else {
        return Err("param pair needs a plain matrix".into());
    };
    let patterns = find_pair_patterns(&h);
    let Some((u, v)) = cols else {
        let pairs: Vec<[usize; 2]> = patterns.iter().map(|p| [p.u + 1, p.v + 1]).collect();
        let found = !pairs.is_empty();
        emit("param-pair", fields(json!({
            "order": h.order(), "qualifying_pairs": pairs,
        })));
        eprintln!("{} qualifying column pairs", patterns.len());
        return Ok(if found { EXIT_OK } else { EXIT_NEGATIVE });
    };
    if u < 1 || v < 1 {
        return Err("column indices are 1-based".into());
    }
    let Some(p) = patterns.iter().find(|p| (p.u, p.v) == (u - 1, v - 1)) else {
        emit("param-pair", fields(json!({
            "order": h.order(), "cols": [u, v], "qualifies": false,
        })));
        eprintln!("columns {u} and {v} do not differ by a sign pattern");
        return Ok(EXIT_NEGATIVE);
    };
    let f = parametrize_pair(&h, p).map_err(|e| e.to_string())?;
    print_object(&Object::Family(f), format);
    eprintln!(
        "one-parameter family on columns {u} and {v} ({} rows carry the parameter)",
        p.opposite_rows.len()
    );
    Ok(EXIT_OK)
}

pub fn conference_gen(q: u64, format: OutputFormat) -> CmdResult {
    let c = conference::paley(q).map_err(|e| e.to_string())?;
    let kind = if c.is_symmetric() { "symmetric" } else { "skew" };
    let order = c.order();
    print_object(&Object::Conference(c), format);
    eprintln!("Paley conference matrix of order {order} ({kind})");
    Ok(EXIT_OK)
}

pub fn conference_feasible(order: usize) -> CmdResult {
    let feasible = conference::order_feasible(order);
    emit("conference-feasible", fields(json!({
        "order": order, "feasible": feasible,
    })));
    eprintln!(
        "order {order}: {}",
        if feasible {
            "passes the symmetric conference matrix condition"
        } else {
            "no symmetric conference matrix exists"
        }
    );
    Ok(u8::from(!feasible))
}

pub fn conference_hadamard(obj: Object, format: OutputFormat) -> CmdResult {
    let Object::Conference(c) = obj else {
        return Err("conference hadamard needs a conference matrix".into());
    };
    let h = conference::to_hadamard(&c).map_err(|e| e.to_string())?;
    let kind = if h.is_real() { "real" } else { "quarter-phase" };
    let order = h.order();
    print_object(&Object::Matrix(h), format);
    eprintln!("{kind} Hadamard matrix of order {order}");
    Ok(EXIT_OK)
}

pub fn conference_param(
    obj: Object,
    pairs: Option<Vec<(usize, usize)>>,
    format: OutputFormat,
) -> CmdResult {
    let d = match obj {
        Object::Conference(c) => conference::dephased_form(&c).map_err(|e| e.to_string())?,
        Object::Matrix(h) => h,
        Object::Family(_) => return Err("conference param needs a matrix, not a family".into()),
    };
    let script: Option<Vec<(usize, usize)>> = match pairs {
        Some(ps) => {
            if ps.iter().any(|&(r, s)| r < 2 || s < 2) {
                return Err("pair rows are 1-based and must lie in the core (row 2 on)".into());
            }
            Some(ps.iter().map(|&(r, s)| (r - 1, s - 1)).collect())
        }
        None => None,
    };
    match conference::build_affine_family(&d, script.as_deref()) {
        Ok(f) => {
            let dim = family_dimension(&f);
            print_object(&Object::Family(f.clone()), format);
            eprintln!(
                "affine family in {} parameters, dimension {}",
                f.param_count(),
                dim
            );
            Ok(EXIT_OK)
        }
        Err(Error::UnsuitablePair { r, s, reason }) => {
            emit("conference-param", fields(json!({
                "built": false, "pair": [r + 1, s + 1], "reason": reason,
            })));
            eprintln!("pair ({}, {}) is not suitable: {reason}", r + 1, s + 1);
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e.to_string()),
    }
}

pub fn family_check(obj: Object) -> CmdResult {
    let f = as_family(obj)?;
    verify_as("family-check", Object::Family(f))
}

pub fn family_eval(obj: Object, at: &[f64]) -> CmdResult {
    let f = as_family(obj)?;
    match f.eval(at).map_err(|e| e.to_string())? {
        Evaluated::Exact(h) => {
            let hadamard = h.is_hadamard();
            emit("family-eval", fields(json!({
                "order": f.order(), "at": at, "mode": "exact", "hadamard": hadamard,
            })));
            eprintln!("exact evaluation: {}", if hadamard { "Hadamard" } else { "not Hadamard" });
            Ok(if hadamard { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Evaluated::Numeric(m) => {
            let dev = m.max_gram_deviation();
            let ok = dev < EVAL_TOL;
            emit("family-eval", fields(json!({
                "order": f.order(), "at": at, "mode": "numeric",
                "max_gram_deviation": dev, "within_tolerance": ok,
            })));
            eprintln!("max Gram deviation {dev:.3e} (tolerance {EVAL_TOL:.0e})");
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

pub fn family_dim(obj: Object) -> CmdResult {
    let f = as_family(obj)?;
    let dim = family_dimension(&f);
    let mut out = fields(json!({
        "order": f.order(), "params": f.params(), "dimension": dim,
    }));
    let bound = defect(&f.base()).ok().map(|d| d.defect);
    if let Some(b) = bound {
        out.insert("defect_bound".into(), b.into());
    }
    emit("family-dim", out);
    eprintln!(
        "dimension {dim} in {} parameters{}",
        f.param_count(),
        bound.map_or(String::new(), |b| format!(" (defect bound {b})"))
    );
    Ok(EXIT_OK)
}

fn as_family(obj: Object) -> Result<AffinePhaseMatrix, String> {
    match obj {
        Object::Family(f) => Ok(f),
        Object::Matrix(h) => Ok(h.as_family(vec![])),
        Object::Conference(_) => Err("needs a family or matrix, not a conference matrix".into()),
    }
}

pub fn catalogue_get(id: &str, format: OutputFormat) -> CmdResult {
    let entry = catalogue::get(id).map_err(|e| e.to_string())?;
    let obj = match entry.object {
        CatalogueObject::Matrix(h) => Object::Matrix(h),
        CatalogueObject::Family(f) => Object::Family(f),
        CatalogueObject::Conference(c) => Object::Conference(c),
    };
    print_object(&obj, format);
    eprintln!("{}: {}", entry.id, entry.provenance);
    Ok(EXIT_OK)
}

pub fn catalogue_list() -> CmdResult {
    let mut entries = Vec::new();
    for (id, provenance) in catalogue::list() {
        let entry = catalogue::get(&id).map_err(|e| e.to_string())?;
        let (kind, order, params) = match &entry.object {
            CatalogueObject::Matrix(h) => ("matrix", h.order(), 0),
            CatalogueObject::Family(f) => ("family", f.order(), f.param_count()),
            CatalogueObject::Conference(c) => ("conference", c.order(), 0),
        };
        eprintln!("{id:<7} {kind:<10} order {order:>2}  {provenance}");
        let mut e = fields(json!({
            "id": id, "kind": kind, "order": order, "provenance": provenance,
        }));
        if params > 0 {
            e.insert("params".into(), params.into());
        }
        entries.push(Value::Object(e));
    }
    emit("catalogue-list", fields(json!({ "entries": entries })));
    Ok(EXIT_OK)
}
