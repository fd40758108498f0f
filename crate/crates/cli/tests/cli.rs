use std::process::{Command, Output};

use rough_core::constants::{ConstantLedger, LEDGER_ROWS, REFERENCE_COLUMNS};
use rough_core::verify::VerificationReport;

fn rough(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rough"))
        .args(args)
        .env_remove("ROUGH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap_or_default().to_string())
        })
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn phi_example() {
    let o = rough(&["phi", "1000", "10"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "phi"), "228");
    let o = rough(&["phi", "1000", "10", "--method", "legendre"]);
    assert_eq!(field(&stdout(&o), "phi"), "228");
}

#[test]
fn omega_example_has_nine_digits() {
    let o = rough(&["omega", "1.5"]);
    let v = field(&stdout(&o), "omega");
    assert_eq!(v, "0.666666667");
    assert!((v.parse::<f64>().unwrap() - 0.666667).abs() < 1e-6);
}

#[test]
fn constants_rh_column_matches_printed_table() {
    let o = rough(&["constants", "--mode", "rh", "--y0", "2657", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ledger: ConstantLedger = serde_json::from_value(v[0]["ledger"].clone()).unwrap();
    let printed = REFERENCE_COLUMNS.iter().find(|c| c.y0 == 2657.0).unwrap();
    for ((name, ours), theirs) in LEDGER_ROWS.iter().zip(ledger.rows()).zip(printed.values) {
        assert!((ours - theirs).abs() <= 5e-5, "{name}: {ours} vs {theirs}");
    }
}

#[test]
fn constants_csv_has_one_row_per_cell() {
    let o = rough(&["constants", "--format", "csv"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>()[..3], ["mode", "y0", "quantity"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4 * 13);
    assert!(rows.iter().all(|r| &r[6] != "mismatch"));
}

#[test]
fn verify_json_round_trips_and_is_reproducible() {
    let args = ["verify", "--theorem", "main-theorem", "--x-cap", "1e6", "--format", "json"];
    let a = rough(&[&args[..], &["--workers", "1"]].concat());
    let b = rough(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: VerificationReport = serde_json::from_slice(&a.stdout).unwrap();
    assert!(report.passed() && report.points_checked > 500);
    assert_eq!(report.runtime_seconds, 0.0);
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again.as_bytes(), a.stdout.as_slice());
}

#[test]
fn verify_lower_bound_small_cap() {
    let o = rough(&["verify", "--theorem", "lower-0.4", "--x-cap", "20000", "--extended"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "violation_count"), "0");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["phi", "10"][..],
        &["frobnicate"],
        &["phi", "0.5", "3"],
        &["bonferroni", "--y", "700"],
        &["constants", "--y0", "229"],
        &["verify", "--theorem", "sandwich", "--extended"],
        &["constants", "--mode", "rh", "--y0", "100"],
    ] {
        let o = rough(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_rough"))
            .args(["main-term", "1e6", "1000", "--format", "csv"])
            .env("ROUGH_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 2, "{files:?}");
    assert_eq!(run().stdout, first.stdout);
    assert_eq!(first.stdout, rough(&["main-term", "1e6", "1000", "--format", "csv"]).stdout);
}
