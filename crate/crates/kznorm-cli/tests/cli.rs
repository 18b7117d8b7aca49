//! End-to-end tests of the `kznorm` binary: output documents, exit
//! codes, cache behavior, and byte-stability of stdout.

use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn kznorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kznorm"))
        .args(args)
        .env_remove("KZNORM_CACHE_DIR")
        .output()
        .expect("failed to spawn kznorm")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed (exit {:?}): {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn alcove_level_zero_is_the_vacuum() {
    let doc = json_of(&kznorm(&["alcove", "--n", "2", "--level", "0"]));
    assert_eq!(doc["count"], 1);
    assert_eq!(doc["entries"][0]["labels"], serde_json::json!([0]));
    assert_eq!(doc["entries"][0]["spin"]["display"], "0");
}

#[test]
fn fusion_level_one_ising_like_rule() {
    let doc = json_of(&kznorm(&["fusion", "--n", "2", "--level", "1"]));
    // Labels are [0] and [1]; the spin-1/2 self-fusion closes on the vacuum.
    assert_eq!(doc["labels"][1]["labels"], serde_json::json!([1]));
    assert_eq!(doc["tensor"][1][1][0], 1);
    assert_eq!(doc["tensor"][1][1][1], 0);
    assert_eq!(doc["tensor"][0][1][1], 1);
}

#[test]
fn qdim_golden_sqrt_two() {
    let doc = json_of(&kznorm(&["qdim", "--n", "2", "--level", "2", "--j", "1/2"]));
    let v = doc["value"].as_f64().unwrap();
    assert!((v - std::f64::consts::SQRT_2).abs() < 1e-12, "got {v}");
}

#[test]
fn norm_with_trivial_insertion_is_one() {
    let doc = json_of(&kznorm(&["norm", "--j", "1/2", "--k", "0", "--kappa", "7.3"]));
    assert_eq!(doc["value"].as_f64(), Some(1.0));
    assert_eq!(doc["degeneracy"], "none");
    assert_eq!(doc["factors"].as_array().unwrap().len(), 0);
}

#[test]
fn norm_outside_window_names_the_offending_factor() {
    let out = kznorm(&["norm", "--j", "2", "--k", "1", "--level", "4"]);
    let doc = json_of(&out);
    assert_eq!(doc["window"], false);
    assert_eq!(doc["value"], Value::Null);
    assert_eq!(doc["factors"][0]["label"], "i=1");
    assert_ne!(doc["factors"][0]["degeneracy"], "none");
    assert!(doc["factors"][0]["detail"].as_str().unwrap().contains("⟦6⟧"));
}

#[test]
fn norm_ratio_reflection_coincidence() {
    // At κ = 5 the products at j = 1 and j = 1/2 agree (reflection of
    // 2j+1 about κ/2), so the c-independent ratio is 1.
    let doc = json_of(&kznorm(&[
        "norm", "--j", "1", "--k", "1", "--kappa", "5", "--ratio", "1/2",
    ]));
    let r = doc["ratio"].as_f64().unwrap();
    assert!((r - 1.0).abs() < 1e-12, "got {r}");
    assert_eq!(doc["ratio_to"]["twice"], 1);
}

#[test]
fn norm_ratio_against_degenerate_operand_is_null_with_note() {
    let doc = json_of(&kznorm(&[
        "norm", "--j", "1", "--k", "1", "--level", "4", "--ratio", "2",
    ]));
    assert_eq!(doc["ratio"], Value::Null);
    assert!(doc["ratio_note"].as_str().unwrap().contains("undefined"));
}

#[test]
fn kz_verify_ratio_is_j_independent() {
    let out = kznorm(&[
        "kz-verify", "--k", "1", "--kappa", "7.3", "--j-max", "3/2", "--tol", "1e-10",
        "--no-cache",
    ]);
    let doc = json_of(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let dev = doc["max_ratio_deviation"].as_f64().unwrap();
    assert!(dev < 1e-6, "ratio deviation {dev}");
}

#[test]
fn kz_verify_refuses_resonant_kappa() {
    let out = kznorm(&["kz-verify", "--k", "1", "--kappa", "3", "--j-max", "1/2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty(), "partial output on nonzero exit");
    assert!(String::from_utf8_lossy(&out.stderr).contains("resonan"));
}

#[test]
fn kz_verify_trivial_insertion_ratios_are_exactly_one() {
    let doc = json_of(&kznorm(&[
        "kz-verify", "--k", "0", "--kappa", "7.3", "--j-max", "1", "--no-cache",
    ]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row["ratio"].as_f64(), Some(1.0), "row {row}");
        assert_eq!(row["numeric"].as_f64(), Some(1.0), "row {row}");
    }
    assert_eq!(doc["max_ratio_deviation"].as_f64(), Some(0.0));
}

#[test]
fn kz_verify_cache_is_fast_and_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "kz-verify", "--k", "2", "--kappa", "7.3", "--j-max", "4", "--tol", "1e-13",
        "--cache-dir", dir.path().to_str().unwrap(),
    ];
    let t0 = Instant::now();
    let first = kznorm(&args);
    let cold = t0.elapsed();
    let t1 = Instant::now();
    let second = kznorm(&args);
    let warm = t1.elapsed();
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout, "cached stdout differs");
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert!(
        warm < cold / 10,
        "cache gave no speedup: cold {cold:?}, warm {warm:?}"
    );
}

#[test]
fn cache_directory_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_kznorm"))
            .args(["kz-verify", "--k", "1", "--kappa", "7.3", "--j-max", "1/2"])
            .env("KZNORM_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(
        std::fs::read_dir(dir.path()).unwrap().count() > 0,
        "cache directory stayed empty"
    );
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
}

#[test]
fn invalid_parameters_exit_2() {
    // Unparseable half-integer.
    let out = kznorm(&["norm", "--j", "abc", "--k", "1", "--kappa", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    // Mutually exclusive parameters.
    let out = kznorm(&[
        "norm", "--j", "1", "--k", "1", "--kappa", "5", "--level", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Missing required flag (rejected by the argument parser).
    let out = kznorm(&["alcove", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // Negative level.
    let out = kznorm(&["alcove", "--n", "2", "--level", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn modular_check_passes_over_a_level_range() {
    let doc = json_of(&kznorm(&["modular-check", "--n", "2", "--levels", "1..8"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    let max = doc["max_residual"].as_f64().unwrap();
    assert!(max < 1e-12, "max residual {max}");
}

#[test]
fn modular_check_level_zero_is_trivial() {
    let doc = json_of(&kznorm(&["modular-check", "--n", "2", "--levels", "0"]));
    assert_eq!(doc["rows"][0]["fusion_entries"], 1);
}

#[test]
fn corrupted_s_matrix_exits_3_without_output() {
    let out = kznorm(&["modular-check", "--n", "2", "--levels", "1..3", "--corrupt-s"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty(), "partial output on nonzero exit");
    assert!(String::from_utf8_lossy(&out.stderr).contains("violated"));
}

#[test]
fn stdout_is_byte_stable_across_runs() {
    let commands: [&[&str]; 6] = [
        &["alcove", "--n", "3", "--level", "2"],
        &["smatrix", "--n", "2", "--level", "3"],
        &["fusion", "--n", "2", "--level", "4", "--format", "csv"],
        &["qdim", "--n", "2", "--kappa", "7.3", "--j", "3/2"],
        &["norm", "--j", "3/2", "--k", "2", "--kappa", "7.3", "--format", "pretty"],
        &["modular-check", "--n", "3", "--levels", "1..3"],
    ];
    for args in commands {
        let a = kznorm(args);
        let b = kznorm(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?} not byte-stable");
    }
}

#[test]
fn smatrix_entries_are_real_sines() {
    let doc = json_of(&kznorm(&["smatrix", "--n", "2", "--level", "1"]));
    let z = &doc["matrix"][0][0];
    assert!((z[0].as_f64().unwrap() - 1.0 / std::f64::consts::SQRT_2).abs() < 1e-14);
    assert_eq!(z[1].as_f64(), Some(0.0));
}

#[test]
fn csv_mirrors_have_expected_headers() {
    let out = kznorm(&["smatrix", "--n", "2", "--level", "1", "--format", "csv"]);
    assert!(stdout_str(&out).starts_with("row,col,re,im\n"));
    let out = kznorm(&[
        "kz-verify", "--k", "0", "--kappa", "7.3", "--j-max", "0", "--no-cache",
        "--format", "csv",
    ]);
    assert!(stdout_str(&out).starts_with("j,twice_j,numeric,closed_form,ratio\n"));
    let out = kznorm(&[
        "norm", "--j", "1", "--k", "1", "--kappa", "7.3", "--format", "csv",
    ]);
    let text = stdout_str(&out);
    assert!(text.starts_with("factor,plus_arg,minus_arg,value,degeneracy,detail\n"));
    assert!(text.contains("\nproduct,"), "no product summary row:\n{text}");
}

#[test]
fn pretty_format_is_human_readable() {
    let out = kznorm(&["qdim", "--n", "2", "--level", "2", "--j", "1/2", "--format", "pretty"]);
    assert!(stdout_str(&out).contains("quantum dimension"));
}

#[test]
fn json_documents_validate_against_shipped_schemas() {
    let cases: [(&str, &[&str]); 12] = [
        ("alcove", &["alcove", "--n", "2", "--level", "3"]),
        ("alcove", &["alcove", "--n", "3", "--level", "2"]),
        ("smatrix", &["smatrix", "--n", "2", "--level", "2"]),
        ("fusion", &["fusion", "--n", "3", "--level", "1"]),
        ("qdim", &["qdim", "--n", "2", "--level", "4", "--j", "3/2"]),
        ("qdim", &["qdim", "--n", "3", "--kappa", "7.3", "--labels", "1,2"]),
        ("norm", &["norm", "--j", "3/2", "--k", "1", "--kappa", "7.3"]),
        ("norm", &["norm", "--j", "2", "--k", "1", "--level", "4"]),
        ("norm", &["norm", "--j", "1", "--k", "1", "--kappa", "5", "--ratio", "1/2"]),
        ("norm", &["norm", "--j", "1", "--k", "1", "--level", "4", "--ratio", "2"]),
        (
            "kz-verify",
            &["kz-verify", "--k", "1", "--kappa", "7.3", "--j-max", "1", "--no-cache"],
        ),
        ("modular-check", &["modular-check", "--n", "2", "--levels", "1..2"]),
    ];
    for (schema_name, args) in cases {
        let schema_path = format!(
            "{}/../../schemas/{schema_name}.schema.json",
            env!("CARGO_MANIFEST_DIR")
        );
        let schema: Value =
            serde_json::from_str(&std::fs::read_to_string(&schema_path).unwrap()).unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let doc = json_of(&kznorm(args));
        let errors: Vec<String> = validator
            .iter_errors(&doc)
            .map(|e| format!("{} at {}", e, e.instance_path()))
            .collect();
        assert!(
            errors.is_empty(),
            "{args:?} violates {schema_name} schema: {errors:?}"
        );
    }
}
