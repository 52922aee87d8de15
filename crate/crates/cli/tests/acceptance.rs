use std::time::Instant;

use cartier_cli::cli::{run, Cli};
use cartier_cli::commands::criterion_title;
use clap::Parser;
use serde_json::Value;

fn machine_suite() -> (i32, String) {
    let cli = Cli::parse_from(["cartier", "--format", "machine", "suite"]);
    let out = run(&cli);
    (out.code, out.stdout)
}

fn criteria(report: &Value) -> Vec<(u8, bool)> {
    let table = report["tables"]
        .as_array()
        .and_then(|ts| ts.iter().find(|t| t["title"] == "acceptance criteria"))
        .expect("criteria table");
    table["rows"]
        .as_array()
        .expect("rows")
        .iter()
        .map(|row| (row[0].as_u64().expect("criterion") as u8, row[3] == "pass"))
        .collect()
}

fn failing_checks(report: &Value, k: u8) -> Vec<String> {
    report["tables"]
        .as_array()
        .and_then(|ts| ts.iter().find(|t| t["title"] == "checks"))
        .and_then(|t| t["rows"].as_array())
        .map(|rows| {
            rows.iter()
                .filter(|r| r[1].as_u64() == Some(k as u64) && r[3].as_u64() != Some(0))
                .filter_map(|r| r[0].as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

fn main() {
    let start = Instant::now();
    let (code_a, first) = machine_suite();
    let (code_b, second) = machine_suite();
    let report: Value = serde_json::from_str(&first).expect("machine report is JSON");
    let found = criteria(&report);

    let mut failed = Vec::new();
    for k in 1..=9u8 {
        let ok = found.iter().any(|&(c, pass)| c == k && pass);
        println!("criterion {k:>2}  {:<36} {}", criterion_title(k), if ok { "pass" } else { "FAIL" });
        if !ok {
            failed.push(k);
            for id in failing_checks(&report, k) {
                println!("    failing check {id}");
            }
        }
    }
    let ok = code_a == code_b && !first.is_empty() && first == second;
    println!("criterion 10  {:<36} {}", criterion_title(10), if ok { "pass" } else { "FAIL" });
    if !ok {
        failed.push(10);
    }

    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance total {elapsed:.1} s");
    if code_a != 0 || !failed.is_empty() || elapsed >= 60.0 {
        eprintln!("acceptance FAILED: criteria {failed:?}, exit code {code_a}, {elapsed:.1} s");
        std::process::exit(1);
    }
}
