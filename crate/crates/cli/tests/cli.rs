//! End-to-end runs of the `chm` binary: exit codes, report JSON, and
//! round trips between subcommands.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn chm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chm"))
        .args(args)
        .env_remove("CHM_DITA_BUDGET")
        .output()
        .expect("binary runs")
}

fn chm_with_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chm"))
        .args(args)
        .env_remove("CHM_DITA_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.as_mut().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    assert_eq!(v["schema"], "chm-report/1");
    v
}

#[test]
fn verify_catalogue_h12() {
    let out = chm(&["verify", "--catalogue", "H12"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["command"], "verify");
    assert_eq!(r["hadamard"], true);
    assert_eq!(r["order"], 12);
}

#[test]
fn verify_rejects_a_non_orthogonal_matrix() {
    let out = chm_with_stdin(&["verify", "-"], b"1 1\n1 1\n");
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["hadamard"], false);
    assert_eq!(r["failing_rows"], serde_json::json!([1, 2]));
}

#[test]
fn verify_reports_operational_errors_with_code_2() {
    assert_eq!(code(&chm(&["verify", "--catalogue", "NOPE"])), 2);
    assert_eq!(code(&chm(&["verify", "/nonexistent/file"])), 2);
    let out = chm_with_stdin(&["verify", "-"], b"garbage tokens\n");
    assert_eq!(code(&out), 2);
}

#[test]
fn info_d10_bundles_the_invariants() {
    let out = chm(&["info", "--catalogue", "D10"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["hadamard"], true);
    assert_eq!(r["defect"], 16);
    assert_eq!(r["defect_exact"], true);
    assert_eq!(r["lambda"], serde_json::json!(["0", "1/4", "1/2", "3/4"]));
    assert_eq!(r["dita"], "not-dita (core has no 1)");
}

#[test]
fn dita_check_h12_refutes_four_cases() {
    let out = chm(&["dita-check", "--catalogue", "H12"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["verdict"], "refutation");
    assert_eq!(r["cases"], serde_json::json!([[2, 6], [3, 4], [4, 3], [6, 2]]));
}

#[test]
fn dita_check_h4_produces_a_certificate() {
    let out = chm(&["dita-check", "--catalogue", "H4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["verdict"], "certificate");
    let cert = &r["certificate"];
    assert_eq!(cert["n"], 2);
    assert_eq!(cert["k"], 2);
    // 1-based indices cover 1..=4.
    let mut seen: Vec<u64> = cert["column_partition"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()))
        .collect();
    seen.sort();
    assert_eq!(seen, vec![1, 2, 3, 4]);
}

#[test]
fn dita_budget_env_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_chm"))
        .args(["dita-check", "--catalogue", "H12"])
        .env("CHM_DITA_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 3);
    assert_eq!(report(&out)["verdict"], "budget-exhausted");

    // The flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_chm"))
        .args(["dita-check", "--catalogue", "H12", "--budget", "100000000"])
        .env("CHM_DITA_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_chm"))
        .args(["dita-check", "--catalogue", "H12"])
        .env("CHM_DITA_BUDGET", "not a number")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 2);
}

#[test]
fn lemma_l_holds_for_p3() {
    let out = chm(&["lemma-l", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["holds"], true);
    assert_eq!(r["candidates"], 4096);
    assert_eq!(code(&chm(&["lemma-l", "4"])), 2);
}

#[test]
fn family_check_d14_6() {
    let out = chm(&["family", "check", "--catalogue", "D14_6"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["command"], "family-check");
    assert_eq!(r["hadamard"], true);
}

#[test]
fn family_check_flags_a_broken_family() {
    let out = chm_with_stdin(
        &["family", "check", "-"],
        b"params: a\n1 1\n1 -1*exp(i*(a))\n",
    );
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["hadamard"], false);
    assert_eq!(r["failure"]["rows"], serde_json::json!([1, 2]));
}

#[test]
fn family_eval_and_dim() {
    let out = chm(&["family", "eval", "--catalogue", "D10_3", "--at", "0.3,1.2,-0.7"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["mode"], "numeric");
    assert!(r["max_gram_deviation"].as_f64().unwrap() < 1e-9);

    let out = chm(&["family", "eval", "--catalogue", "H12_7", "--at", "0,0,0,0,0,0,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["mode"], "exact");

    // Wrong arity is an operational error.
    assert_eq!(code(&chm(&["family", "eval", "--catalogue", "D10_3", "--at", "0.1"])), 2);

    let out = chm(&["family", "dim", "--catalogue", "H12_7"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["dimension"], 7);
    assert!(r["defect_bound"].as_u64().unwrap() >= 7);
}

#[test]
fn catalogue_get_feeds_verify_in_both_formats() {
    for format in ["json", "text"] {
        for id in ["H12", "D10_3", "C6"] {
            let got = chm(&["catalogue", "get", id, "--format", format]);
            assert_eq!(code(&got), 0, "get {id} {format}");
            let verified = chm_with_stdin(&["verify", "-"], &got.stdout);
            assert_eq!(code(&verified), 0, "verify {id} from {format}");
        }
    }
}

#[test]
fn catalogue_get_family_round_trips_exactly() {
    let got = chm(&["catalogue", "get", "D14_6"]);
    let f = chm_core::io::family_from_json(std::str::from_utf8(&got.stdout).unwrap()).unwrap();
    let entry = chm_core::catalogue::get("D14_6").unwrap();
    match entry.object {
        chm_core::catalogue::CatalogueObject::Family(expected) => assert_eq!(f, expected),
        _ => panic!("D14_6 is a family"),
    }
}

#[test]
fn catalogue_list_covers_all_entries() {
    let out = chm(&["catalogue", "list"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let entries = r["entries"].as_array().unwrap();
    assert_eq!(entries.len(), chm_core::catalogue::list().len());
    assert!(entries.iter().any(|e| e["id"] == "H12" && e["kind"] == "matrix"));
    assert!(entries.iter().any(|e| e["id"] == "D14_6" && e["params"] == 6));
}

#[test]
fn dephase_pipes_into_verify() {
    let out = chm_with_stdin(&["dephase", "-", "--format", "text"], b"i i\ni -i\n");
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let h = chm_core::io::matrix_from_text(&text).unwrap();
    assert!(h.is_dephased());
}

#[test]
fn param_real_h12_yields_seven_parameters() {
    let out = chm(&["param", "real", "--catalogue", "H12"]);
    assert_eq!(code(&out), 0);
    let f = chm_core::io::family_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(f.param_count(), 7);
    assert!(f.is_hadamard_family());
}

#[test]
fn param_pair_lists_and_builds() {
    let out = chm(&["param", "pair", "--catalogue", "F6"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["qualifying_pairs"], serde_json::json!([[1, 4], [2, 5], [3, 6]]));

    let out = chm(&["param", "pair", "--catalogue", "F6", "--cols", "1,4"]);
    assert_eq!(code(&out), 0);
    let f = chm_core::io::family_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(f.param_count(), 1);
    assert!(f.is_hadamard_family());

    // A pair with no sign pattern is a negative verdict, not an error.
    let out = chm(&["param", "pair", "--catalogue", "F6", "--cols", "1,2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["qualifies"], false);
}

#[test]
fn conference_pipeline_gen_hadamard_verify() {
    let gen = chm(&["conference", "gen", "--paley", "5", "--format", "text"]);
    assert_eq!(code(&gen), 0);
    let had = chm_with_stdin(&["conference", "hadamard", "-"], &gen.stdout);
    assert_eq!(code(&had), 0);
    let verified = chm_with_stdin(&["verify", "-"], &had.stdout);
    assert_eq!(code(&verified), 0);
    assert_eq!(report(&verified)["hadamard"], true);
}

#[test]
fn conference_feasibility_exit_codes() {
    assert_eq!(code(&chm(&["conference", "feasible", "10"])), 0);
    assert_eq!(code(&chm(&["conference", "feasible", "22"])), 1);
    assert_eq!(code(&chm(&["conference", "feasible", "34"])), 1);
}

#[test]
fn conference_param_script_matches_catalogue() {
    let out = chm(&[
        "conference", "param", "--catalogue", "D10", "--pairs", "2,10;3,9;5,7",
    ]);
    assert_eq!(code(&out), 0);
    let f = chm_core::io::family_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let entry = chm_core::catalogue::get("D10_3").unwrap();
    match entry.object {
        chm_core::catalogue::CatalogueObject::Family(expected) => assert_eq!(f, expected),
        _ => panic!("D10_3 is a family"),
    }
}

#[test]
fn conference_param_greedy_c6_has_one_parameter() {
    let out = chm(&["conference", "param", "--catalogue", "C6"]);
    assert_eq!(code(&out), 0);
    let f = chm_core::io::family_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(f.param_count(), 1);
}

#[test]
fn conference_param_unsuitable_pair_is_a_negative_verdict() {
    let out = chm(&[
        "conference", "param", "--catalogue", "D10", "--pairs", "2,10;3,9;5,7;2,3",
    ]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["built"], false);
    assert_eq!(r["pair"], serde_json::json!([2, 3]));
}

#[test]
fn paley_source_shortcut() {
    let out = chm(&["conference", "hadamard", "--paley", "13", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let h = chm_core::io::matrix_from_text(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(h.order(), 14);
    assert!(h.is_hadamard());
}
