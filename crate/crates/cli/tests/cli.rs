use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribilliard"))
        .args(args)
        .env("TRIBILLIARD_CACHE", cache)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn constants_prints_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["constants"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.732050807568877"), "{}", stdout(&o));
}

#[test]
fn inadmissible_shape_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "--alpha",
            "0.9",
            "--beta",
            "0.9",
            "--delta",
            "2.0",
            "enumerate",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("admissible"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(dir.path(), &["enumerate", "--n-max", "many"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bad_point_syntax_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "area-poly",
            "--point",
            "A+",
            "--point",
            "B-:upper",
            "--point",
            ":alpha",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    let o = run(dir.path(), &["area-poly", "--point", "A+:upper"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_matches_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["--n-max", "10", "enumerate", "--format", "json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "enumerate");
    assert_eq!(v["result"]["table"].as_array().unwrap().len(), 11);

    let index: Value =
        serde_json::from_slice(&fs::read(dir.path().join("latest.json")).unwrap()).unwrap();
    let rel = index["enumerate.json"]["path"].as_str().unwrap();
    assert_eq!(fs::read(dir.path().join(rel)).unwrap(), o.stdout);
    assert!(index["enumerate.json"]["written_unix"].is_u64());
    assert!(dir.path().join("enumeration").read_dir().unwrap().count() == 3);
}

#[test]
fn csv_output_is_also_stored() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--n-max", "12", "report", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n,p_n,log_bound,ratio,periodic_upper"));
    assert_eq!(text.lines().count(), 13);
    let index: Value =
        serde_json::from_slice(&fs::read(dir.path().join("latest.json")).unwrap()).unwrap();
    assert!(index.get("report.csv").is_some());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "--alpha",
        "pi/5",
        "--beta",
        "0.7",
        "--n-max",
        "14",
        "--threads",
        "2",
        "partitions",
        "--format",
        "json",
    ];
    let first = run(a.path(), &args);
    let cached = run(a.path(), &args);
    let fresh = run(b.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, cached.stdout);
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn stale_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--n-max",
        "8",
        "enumerate",
        "--vertex",
        "A",
        "--format",
        "json",
    ];
    let first = run(dir.path(), &args);
    for entry in fs::read_dir(dir.path().join("enumeration")).unwrap() {
        fs::write(entry.unwrap().path(), b"{\"schema_version\": 0}").unwrap();
    }
    let again = run(dir.path(), &args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn lemma_check_and_good_triples_succeed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(dir.path(), &["verify-lemma21", "--c", "2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(dir.path(), &["verify-lemma21", "--c", "9"])
            .status
            .code(),
        Some(1)
    );
    let o = run(
        dir.path(),
        &[
            "--alpha",
            "0.8",
            "--beta",
            "1.1",
            "--n-max",
            "20",
            "good-triples",
            "--close-n",
            "6",
            "--format",
            "json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["zero_area"], 0);
    assert!(!v["result"]["triples"].as_array().unwrap().is_empty());
}
