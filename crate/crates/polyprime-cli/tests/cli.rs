//! End-to-end tests against the compiled binary: golden CSV transcripts for
//! every command, JSON schema conformance, exit codes, and the error
//! envelope. Set `UPDATE_GOLDEN=1` to rewrite the transcripts after an
//! intentional output change — then re-verify the numbers before
//! committing.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polyprime")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary spawns")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "`polyprime {}` failed:\n{}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares command output against a committed transcript, or rewrites the
/// transcript when `UPDATE_GOLDEN` is set.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; run with UPDATE_GOLDEN=1", name));
    assert_eq!(
        actual, expected,
        "output drifted from tests/golden/{name}; \
         rerun with UPDATE_GOLDEN=1 if the change is intentional"
    );
}

/// Masks the wall-clock column so `count` output can be golden-tested.
fn mask_elapsed(csv: &str) -> String {
    let mut lines: Vec<String> = Vec::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 || line.starts_with('#') {
            lines.push(line.to_string());
        } else {
            let cut = line.rfind(',').expect("count rows have columns");
            lines.push(format!("{},<elapsed>", &line[..cut]));
        }
    }
    lines.join("\n") + "\n"
}

// ---------------------------------------------------------------- golden

#[test]
fn golden_count() {
    let out = stdout_of(&["count", "--poly", "x^2", "--n", "10", "--n", "100"]);
    assert_golden("count.csv", &mask_elapsed(&out));
}

#[test]
fn golden_sweep() {
    let out = stdout_of(&["sweep", "--poly", "x^2", "--n", "10:1000:10", "--threads", "2"]);
    assert_golden("sweep.csv", &out);
}

#[test]
fn golden_predict() {
    let out = stdout_of(&["predict", "--poly", "x^2+1", "--n", "100", "--n", "1000"]);
    assert_golden("predict.csv", &out);
}

#[test]
fn golden_series() {
    let out = stdout_of(&[
        "series", "--poly", "x^2-1", "--trunc-p", "1000", "--trunc-q", "500",
    ]);
    assert_golden("series.csv", &out);
}

#[test]
fn golden_series_generalized_form_has_null_crosscheck() {
    let out = stdout_of(&["series", "--poly", "x^2", "--form", "3,1", "--trunc-p", "1000"]);
    assert_golden("series_form.csv", &out);
}

#[test]
fn golden_bias() {
    let out = stdout_of(&["bias", "--poly", "x^2+1", "--n", "20000", "--max-p", "11"]);
    assert_golden("bias.csv", &out);
}

#[test]
fn golden_verify() {
    let out = stdout_of(&["verify", "--poly", "x^2", "--n", "100"]);
    assert_golden("verify.csv", &out);
}

#[test]
fn golden_collapse_count_has_null_ratios() {
    let out = stdout_of(&["count", "--poly", "2x+1", "--n", "50"]);
    assert_golden("count_collapse.csv", &mask_elapsed(&out));
}

// ---------------------------------------------------------------- schema

fn validator() -> jsonschema::Validator {
    let raw = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/output.schema.json"),
    )
    .expect("schema file");
    let schema: serde_json::Value = serde_json::from_str(&raw).expect("schema parses");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn json_output_conforms_to_schema_for_every_command() {
    let validator = validator();
    let invocations: &[&[&str]] = &[
        &["count", "--poly", "x^2", "--n", "100", "--format", "json"],
        &["sweep", "--poly", "x^2", "--n", "10:100:10", "--format", "json"],
        &["predict", "--poly", "x^2+1", "--n", "100", "--format", "json"],
        &["series", "--poly", "x^2-1", "--trunc-p", "500", "--trunc-q", "200", "--format", "json"],
        &["series", "--poly", "x^2", "--form", "2,1", "--trunc-p", "500", "--format", "json"],
        &["bias", "--poly", "x^2+1", "--n", "5000", "--max-p", "7", "--format", "json"],
        &["verify", "--poly", "x^2", "--n", "100", "--format", "json"],
        &["count", "--poly", "2x+1", "--n", "50", "--format", "json"],
    ];
    for args in invocations {
        let text = stdout_of(args);
        let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        let errors: Vec<String> =
            validator.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(
            errors.is_empty(),
            "`polyprime {}` violates the schema:\n{}",
            args.join(" "),
            errors.join("\n")
        );
    }
}

#[test]
fn json_error_envelope_conforms_to_schema() {
    let validator = validator();
    let out = run(&["count", "--poly", "x^2", "--n", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("error envelope is JSON");
    assert!(validator.is_valid(&value));
    assert!(value["error"]["message"].as_str().unwrap().contains("N must be at least 2"));
    assert_eq!(value["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn schema_actually_binds_row_shapes() {
    // Guard against an if/then wiring mistake silently accepting anything.
    let validator = validator();
    let bad: serde_json::Value = serde_json::json!({
        "command": "predict",
        "rows": [{ "poly": 42 }]
    });
    assert!(!validator.is_valid(&bad));
    let wrong_command: serde_json::Value = serde_json::json!({
        "command": "frobnicate",
        "rows": []
    });
    assert!(!validator.is_valid(&wrong_command));
}

// ------------------------------------------------------------ exit codes

#[test]
fn usage_error_exits_2() {
    let out = run(&["count", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_error_exits_1_with_csv_trailer() {
    let out = run(&["count", "--poly", "x^2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "poly,a1,a2,N,exact,weighted,main_weighted,main_unweighted,ratio_weighted,\
         ratio_unweighted,series_value,series_tail_bound,elapsed_s"
    );
    assert!(lines.next().unwrap().starts_with("# error: "));
}

#[test]
fn rejected_polynomial_names_its_mirror() {
    let out = run(&["count", "--poly=-x^2+1", "--n", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# error: "), "missing error trailer: {text}");
    assert!(text.contains("x^2 - 1"), "mirror suggestion missing: {text}");
}

#[test]
fn verify_passes_on_well_behaved_input() {
    let out = run(&["verify", "--poly", "x^2+1", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("orthogonality"));
    assert!(text.contains(",pass"));
    assert!(!text.contains(",fail"));
}

// ------------------------------------------------------------- plumbing

#[test]
fn out_flag_writes_file_and_stdout_stays_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "predict", "--poly", "x^2", "--n", "100",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "stdout should stay empty when --out is given");
    let written = fs::read_to_string(&path).unwrap();
    let direct = stdout_of(&["predict", "--poly", "x^2", "--n", "100"]);
    assert_eq!(written, direct);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "poly = x^2 + 1\nn = 500\n# a comment\ntrunc-p = 1000\n").unwrap();
    let from_file = stdout_of(&["predict", "--config", path.to_str().unwrap()]);
    assert!(from_file.lines().nth(1).unwrap().starts_with("x^2 + 1,1,-1,500,"));
    let overridden = stdout_of(&[
        "predict", "--config", path.to_str().unwrap(), "--n", "100",
    ]);
    assert!(overridden.lines().nth(1).unwrap().starts_with("x^2 + 1,1,-1,100,"));
}

#[test]
fn n_range_expands_geometrically() {
    let out = stdout_of(&["sweep", "--poly", "x^2", "--n", "10:1000:10"]);
    let ns: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(ns, ["10", "100", "1000"]);
}

#[test]
fn threads_flag_does_not_change_results() {
    let one = stdout_of(&["sweep", "--poly", "x^2+1", "--n", "100:10000:10", "--threads", "1"]);
    let four = stdout_of(&["sweep", "--poly", "x^2+1", "--n", "100:10000:10", "--threads", "4"]);
    assert_eq!(one, four);
}

#[test]
fn count_matches_known_small_values() {
    // x^2 at N=10: the only prime pairs at a positive square distance are
    // (3,2) at distance 1 and (7,3) at distance 4. Exactly two.
    let out = stdout_of(&["count", "--poly", "x^2", "--n", "10"]);
    let row = out.lines().nth(1).unwrap();
    let exact: u64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(exact, 2);
}
