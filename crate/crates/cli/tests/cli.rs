use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use cartier_cli::cli::{finish, Format};
use cartier_cli::report::RunReport;
use serde_json::Value;

fn instances() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn instance(name: &str) -> String {
    instances().join(name).to_string_lossy().into_owned()
}

fn cartier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartier")).args(args).output().expect("binary runs")
}

fn machine(args: &[&str]) -> Value {
    let mut full = vec!["--format", "machine"];
    full.extend_from_slice(args);
    let out = cartier(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn table<'a>(report: &'a Value, title: &str) -> &'a Vec<Value> {
    report["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["title"] == title)
        .unwrap_or_else(|| panic!("no table {title}"))["rows"]
        .as_array()
        .unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn every_shipped_instance_validates() {
    let mut seen = 0;
    for entry in fs::read_dir(instances()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "inst") {
            let out = cartier(&["validate", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), stderr(&out));
            seen += 1;
        }
    }
    assert!(seen >= 8);
}

#[test]
fn corrupted_kappa_names_the_basis_element() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(instance("f2_dual_numbers.inst")).unwrap();
    let bad = text.replace("kappa = 0 0; 1 0", "kappa = 0 1; 0 0");
    let path = write_temp(&dir, "bad.inst", &bad);
    let out = cartier(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("[cartier A_soc]") && err.contains("basis element x"), "{err}");
}

#[test]
fn non_associative_constants_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[algebra]
field = 2
basis = 1 a b
unit = 1 0 0
product 1 1 = 1 0 0
product 1 a = 0 1 0
product 1 b = 0 0 1
product a a = 0 0 1
product a b = 0 1 0
";
    let path = write_temp(&dir, "nonassoc.inst", text);
    let out = cartier(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not associative: ("), "{}", stderr(&out));
}

#[test]
fn exit_codes() {
    let dual = instance("f2_dual_numbers.inst");
    assert_eq!(cartier(&["validate", &dual]).status.code(), Some(0));
    assert_eq!(cartier(&["hom", &dual, "k0", "nowhere"]).status.code(), Some(2));
    assert_eq!(cartier(&["truncate", &dual, "aug", "--degree", "0", "--side", "middle"]).status.code(), Some(2));
    assert_eq!(cartier(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.inst");
    assert_eq!(cartier(&["validate", missing.to_str().unwrap()]).status.code(), Some(3));

    let mut r = RunReport::new("demo", 1);
    r.verdict("holds", true, None);
    assert_eq!(finish(r.clone(), Format::Machine, 0.0).code, 0);
    r.verdict("fails", false, Some("witness".into()));
    let out = finish(r, Format::Human, 0.0);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL  fails: witness"));
}

#[test]
fn les_on_the_dual_numbers() {
    let r = machine(&["les", &instance("f2_dual_numbers.inst"), "k0", "k0"]);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
    let ext = table(&r, "ext dimensions");
    assert_eq!(ext[1][1], 2, "{ext:?}");
}

#[test]
fn zero_perversity_matches_standard_truncation() {
    for (file, complex) in [("f2_dual_numbers.inst", "aug"), ("f2xf2.inst", "C"), ("f4xf2_dual_numbers.inst", "C")] {
        for side in ["geq", "leq"] {
            for degree in ["-1", "0", "1", "2"] {
                let base = ["truncate", &instance(file), complex, "--degree", degree, "--side", side];
                let standard = machine(&base);
                let mut with_pv = base.to_vec();
                with_pv.extend(["--perversity", "zero"]);
                let perverse = machine(&with_pv);
                assert_eq!(standard["tables"], perverse["tables"], "{file} {side} {degree}");
                assert_eq!(standard["verdicts"], perverse["verdicts"], "{file} {side} {degree}");
            }
        }
    }
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn human_and_machine_agree() {
    let dual = instance("f2_dual_numbers.inst");
    let cases: [&[&str]; 4] = [
        &["ext", &dual, "k0", "k1"],
        &["les", &dual, "k0", "A_soc"],
        &["hom", &dual, "A_soc", "A_zero"],
        &["perverse", &dual, "aug", "one"],
    ];
    for args in cases {
        let r = machine(args);
        let human = String::from_utf8(cartier(args).stdout).unwrap();
        let lines: Vec<String> = human.lines().map(collapse).collect();
        for t in r["tables"].as_array().unwrap() {
            for row in t["rows"].as_array().unwrap() {
                let rendered: Vec<String> = row
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|c| c.as_str().map_or_else(|| c.to_string(), String::from))
                    .collect();
                let want = collapse(&rendered.join(" "));
                assert!(lines.contains(&want), "{args:?}: missing row `{want}`");
            }
        }
    }
}

#[test]
fn scoped_suite_only_runs_that_scope() {
    let r = machine(&["suite", "--scope", "linalg"]);
    let verdicts = r["verdicts"].as_array().unwrap();
    assert!(!verdicts.is_empty());
    assert!(verdicts.iter().all(|v| v["name"].as_str().unwrap().starts_with("linalg_fp/")));
    assert_eq!(r["arguments"]["scope"], "linalg_fp");
}

#[test]
fn seed_changes_samples_not_verdicts() {
    let a = machine(&["--seed", "1", "suite", "--scope", "algebra"]);
    let b = machine(&["--seed", "2", "suite", "--scope", "algebra"]);
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    for r in [a, b] {
        assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
    }
}
