//! End-to-end tests of the `qnnlab` binary: exit codes, output files, and
//! the acceptance requirement that any run is byte-identical when repeated
//! from its resolved-config snapshot.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qnnlab_core::data::{write_idx_images, write_idx_labels, IdxImages};

fn qnnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnnlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

/// Rerun a finished run from its snapshot and require byte-identical
/// outputs in a fresh directory.
fn assert_reproducible(subcommand: &str, first_out: &Path, scratch: &Path) {
    let rerun_out = scratch.join("rerun");
    let config = first_out.join("resolved_config.json");
    let output = qnnlab(&[
        subcommand,
        "--config",
        config.to_str().unwrap(),
        "--out",
        rerun_out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let first = read_dir_files(first_out);
    let second = read_dir_files(&rerun_out);
    assert_eq!(first.len(), second.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(&second) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between runs");
    }
}

#[test]
fn lemma_check_passes_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let output = qnnlab(&[
        "lemma-check",
        "--seed",
        "7",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("cnot-conjugation"));
    assert!(stdout.contains("pass"));
    assert!(out.join("lemma_check.json").exists());
    assert_reproducible("lemma-check", &out, dir.path());

    // a different seed changes the random operators but never the verdict
    let other = qnnlab(&["lemma-check", "--seed", "8", "--out", out.to_str().unwrap()]);
    assert_exit(&other, 0);
}

#[test]
fn verify_bounds_exact_tt2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "tt",
        "--n",
        "2",
        "--mode",
        "exact",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let csv = std::fs::read_to_string(out.join("bound_report.csv")).unwrap();
    assert!(csv.starts_with("arch,n,"));
    assert!(csv.contains("tt,2,"));
    assert!(csv.contains(",true,"));
    assert_reproducible("verify-bounds", &out, dir.path());
}

#[test]
fn verify_bounds_dtt_at_odd_qubit_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "dtt",
        "--n",
        "3",
        "--mode",
        "exact",
        "--seed",
        "1",
        "--input",
        "basis:110",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let csv = std::fs::read_to_string(out.join("bound_report.csv")).unwrap();
    assert!(csv.contains("dtt,3,"));
}

#[test]
fn verify_bounds_mc_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "sc",
        "--n",
        "4",
        "--n-c",
        "2",
        "--mode",
        "mc",
        "--samples",
        "200",
        "--seed",
        "33",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    assert_reproducible("verify-bounds", &out, dir.path());
}

#[test]
fn verify_bounds_over_budget_exits_2_with_mc_advice() {
    // encoder at n=4, L=1 has 12 parameters: 5^12 grid points, over the cap
    let dir = tempfile::tempdir().unwrap();
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "encoder",
        "--n",
        "4",
        "--layers",
        "1",
        "--mode",
        "exact",
        "--seed",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_exit(&output, 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("Monte Carlo"), "stderr: {stderr}");
}

#[test]
fn bad_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    // sc without --n-c
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "sc",
        "--n",
        "4",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    assert_exit(&output, 2);
    // unknown architecture
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "ring",
        "--n",
        "4",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    assert_exit(&output, 2);
    // tt at non-power-of-two n
    let output = qnnlab(&[
        "verify-bounds",
        "--arch",
        "tt",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    assert_exit(&output, 2);
}

#[test]
fn train_encoder_basis_e1_reaches_high_fidelity_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let output = qnnlab(&[
        "train-encoder",
        "--basis-e1",
        "--n",
        "4",
        "--layers",
        "1",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("encoder_result.json")).unwrap())
            .unwrap();
    assert!(result["fidelity"].as_f64().unwrap() >= 0.99);
    assert_eq!(result["objective_history"].as_array().unwrap().len(), 100);
    assert_reproducible("train-encoder", &out, dir.path());
}

#[test]
fn train_encoder_exact_mode_skips_training() {
    let dir = tempfile::tempdir().unwrap();
    let vector_path = dir.path().join("vector.json");
    std::fs::write(
        &vector_path,
        serde_json::to_string(&vec![0.5f64; 16]).unwrap(),
    )
    .unwrap();
    let output = qnnlab(&[
        "train-encoder",
        "--input-vector",
        vector_path.to_str().unwrap(),
        "--exact-encoding",
        "--seed",
        "1",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let result: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/encoder_result.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(result["mode"], "exact");
    assert_eq!(result["fidelity"].as_f64().unwrap(), 1.0);
}

#[test]
fn train_encoder_dataset_mode_emits_per_vector_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = qnnlab(&[
        "train-encoder",
        "--dataset",
        "synthetic",
        "--n",
        "4",
        "--per-class",
        "2",
        "--layers",
        "1",
        "--iters",
        "10",
        "--seed",
        "4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let records: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("encode_records.json")).unwrap())
            .unwrap();
    let rows = records.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // trained mode records carry each vector's β (12 parameters at L = 1)
    assert_eq!(rows[0]["beta"].as_array().unwrap().len(), 12);
}

#[test]
fn trained_encoder_output_reloads_to_identical_behavior() {
    // β* from the output JSON rebuilds an encoder whose state matches the
    // recorded fidelity against the input
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let output = qnnlab(&[
        "train-encoder",
        "--basis-e1",
        "--n",
        "4",
        "--layers",
        "1",
        "--iters",
        "20",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("encoder_result.json")).unwrap())
            .unwrap();
    let beta: Vec<f64> = result["beta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let w = qnnlab_core::circuits::build_alternating_w(4, 1).unwrap();
    let encoder = qnnlab_core::circuits::build_encoder_u(&w).unwrap();
    let zero = qnnlab_core::StateVector64::zero_state(4).unwrap();
    let state = encoder.run(&zero, &beta).unwrap();
    let fidelity = state.amplitudes()[0].abs();
    assert!((fidelity - result["fidelity"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn criterion_9_classify_run_is_byte_identical_from_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let output = qnnlab(&[
        "classify",
        "--dataset",
        "synthetic",
        "--n",
        "4",
        "--per-class",
        "12",
        "--arch",
        "sc",
        "--n-c",
        "2",
        "--iters",
        "4",
        "--batch",
        "6",
        "--shots-train",
        "32",
        "--shots-test",
        "64",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    for name in [
        "history.csv",
        "metrics.csv",
        "model.json",
        "resolved_config.json",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    assert_reproducible("classify", &out, dir.path());
}

#[test]
fn classify_random_arch_matches_structured_gate_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let output = qnnlab(&[
        "classify",
        "--dataset",
        "synthetic",
        "--n",
        "4",
        "--per-class",
        "8",
        "--arch",
        "random",
        "--match",
        "tt",
        "--iters",
        "2",
        "--batch",
        "4",
        "--shots-train",
        "exact",
        "--shots-test",
        "exact",
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("model.json")).unwrap()).unwrap();
    let gates = model["objective"]["circuit"]["gates"].as_array().unwrap();
    let ry = gates.iter().filter(|g| g["kind"] == "ry").count();
    let cnot = gates.iter().filter(|g| g["kind"] == "cnot").count();
    assert_eq!(ry, 7, "matched RY count");
    assert_eq!(cnot, 3, "matched CNOT count");
}

#[test]
fn classify_match_sc_and_bad_match_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let base = [
        "classify",
        "--dataset",
        "synthetic",
        "--n",
        "4",
        "--per-class",
        "6",
        "--arch",
        "random",
        "--iters",
        "1",
        "--batch",
        "3",
        "--shots-train",
        "exact",
        "--shots-test",
        "exact",
        "--seed",
        "9",
    ];
    let mut args: Vec<&str> = base.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    args.extend(["--match", "sc", "--n-c", "2", "--out", &out_str]);
    assert_exit(&qnnlab(&args), 0);
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("model.json")).unwrap()).unwrap();
    let gates = model["objective"]["circuit"]["gates"].as_array().unwrap();
    assert_eq!(gates.iter().filter(|g| g["kind"] == "ry").count(), 7);
    assert_eq!(gates.iter().filter(|g| g["kind"] == "cnot").count(), 3);

    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--match", "ring", "--out", &out_str]);
    assert_exit(&qnnlab(&args), 2);
}

fn write_idx_dataset(dir: &Path) -> (PathBuf, PathBuf) {
    // 4×4 images so side 4 → n = 4; two classes with distinct intensity
    // layouts plus one out-of-pair label and one all-zero image
    let mut images = Vec::new();
    let mut labels = Vec::new();
    for i in 0..12u8 {
        let mut pixels = vec![0u8; 16];
        if i % 2 == 0 {
            pixels[0] = 200 + (i % 3) * 10;
            pixels[1] = 40;
            labels.push(0);
        } else {
            pixels[14] = 150 + (i % 5) * 9;
            pixels[15] = 90;
            labels.push(2);
        }
        images.push(pixels);
    }
    images.push(vec![0u8; 16]); // dropped: all zero
    labels.push(0);
    images.push(vec![9u8; 16]); // dropped: label outside the pair
    labels.push(5);
    let idx = IdxImages {
        rows: 4,
        cols: 4,
        images,
    };
    let images_path = dir.join("images.idx");
    let labels_path = dir.join("labels.idx");
    std::fs::write(&images_path, write_idx_images(&idx)).unwrap();
    std::fs::write(&labels_path, write_idx_labels(&labels)).unwrap();
    (images_path, labels_path)
}

#[test]
fn classify_consumes_idx_files() {
    let dir = tempfile::tempdir().unwrap();
    let (images, labels) = write_idx_dataset(dir.path());
    let out = dir.path().join("out");
    let output = qnnlab(&[
        "classify",
        "--dataset",
        "idx",
        "--idx-train-images",
        images.to_str().unwrap(),
        "--idx-train-labels",
        labels.to_str().unwrap(),
        "--idx-test-images",
        images.to_str().unwrap(),
        "--idx-test-labels",
        labels.to_str().unwrap(),
        "--pair",
        "0,2",
        "--side",
        "4",
        "--arch",
        "tt",
        "--iters",
        "3",
        "--batch",
        "4",
        "--shots-train",
        "exact",
        "--shots-test",
        "exact",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(metrics.starts_with("pair,arch,n,"));
    assert!(metrics.contains("0-2,tt,4,"));
}
