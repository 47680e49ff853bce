//! End-to-end tests of the command-line interface and its exit codes:
//! 0 embeddable/classical, 3 nonembeddable/nonclassical, 4 inconclusive,
//! 1 error.

use std::path::Path;
use std::process::{Command, Output};

fn gptnc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gptnc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json on stdout")
}

#[test]
fn catalog_emits_gpt_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = gptnc(&["catalog", "rebit"], dir.path());
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["states"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["meta"]["name"], "rebit");

    let out = gptnc(&["catalog", "classical", "--d", "3"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["effects"]["vertices"].as_array().unwrap().len(), 8);

    let out = gptnc(&["catalog", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalog_csv_format_emits_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = gptnc(&["--format", "csv", "catalog", "gbit"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("prep,"));
    assert!(text.contains("1|M0"));
}

#[test]
fn embed_exit_codes_separate_the_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let rebit = dir.path().join("rebit.json");
    assert!(gptnc(&["catalog", "rebit", "--out", rebit.to_str().unwrap()], dir.path())
        .status
        .success());
    let out = gptnc(&["embed", "--gpt", rebit.to_str().unwrap(), "--min-d"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["embeddable"], true);
    assert_eq!(v["lower_bound"], 4);
    assert_eq!(v["min_d"], 4);

    let gbit = dir.path().join("gbit.json");
    assert!(gptnc(&["catalog", "gbit", "--out", gbit.to_str().unwrap()], dir.path())
        .status
        .success());
    let out = gptnc(&["embed", "--gpt", gbit.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["embeddable"], false);
    assert!(v["farkas"].is_array());
}

#[test]
fn validate_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let rebit = dir.path().join("rebit.json");
    gptnc(&["catalog", "rebit", "--out", rebit.to_str().unwrap()], dir.path());
    let out = gptnc(&["validate", "--gpt", rebit.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    // Scale one state vertex by 1.1: normalization fails.
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rebit).unwrap()).unwrap();
    v["states"]["vertices"][0] = serde_json::json!(["11/10", "0", "11/10"]);
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, serde_json::to_string(&v).unwrap()).unwrap();
    let out = gptnc(&["validate", "--gpt", broken.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["valid"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"state_normalization"));
}

#[test]
fn quotient_then_embed_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rebit.csv");
    assert!(gptnc(
        &["--format", "csv", "catalog", "rebit", "--out", csv.to_str().unwrap()],
        dir.path()
    )
    .status
    .success());
    let gpt_path = dir.path().join("quotiented.json");
    let out = gptnc(
        &[
            "quotient",
            "--table",
            csv.to_str().unwrap(),
            "--out",
            gpt_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&gpt_path).unwrap()).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(v["meta"]["quotient_rank"], "3");
    let out = gptnc(&["embed", "--gpt", gpt_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn quasiprob_from_model() {
    let dir = tempfile::tempdir().unwrap();
    let rebit = dir.path().join("rebit.json");
    gptnc(&["catalog", "rebit", "--out", rebit.to_str().unwrap()], dir.path());
    let embed_out = dir.path().join("verdict.json");
    gptnc(
        &["embed", "--gpt", rebit.to_str().unwrap(), "--out", embed_out.to_str().unwrap()],
        dir.path(),
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&embed_out).unwrap()).unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(&model, serde_json::to_string(&v["model"]).unwrap()).unwrap();
    let out = gptnc(
        &[
            "quasiprob",
            "--gpt",
            rebit.to_str().unwrap(),
            "--from-model",
            model.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let rep = stdout_json(&out);
    assert_eq!(rep["positive"], true);
    assert_eq!(rep["negativity"]["total"], "0");
}

#[test]
fn robustness_radius_of_the_gbit() {
    let dir = tempfile::tempdir().unwrap();
    let gbit = dir.path().join("gbit.json");
    gptnc(&["catalog", "gbit", "--out", gbit.to_str().unwrap()], dir.path());
    let out = gptnc(&["robustness", "--gpt", gbit.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["radius"], "1199/4096");
}

#[test]
fn verdict_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let gbit_csv = dir.path().join("gbit.csv");
    gptnc(
        &["--format", "csv", "catalog", "gbit", "--out", gbit_csv.to_str().unwrap()],
        dir.path(),
    );
    let out = gptnc(&["verdict", "--table", gbit_csv.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let classical_csv = dir.path().join("classical.csv");
    gptnc(
        &[
            "--format", "csv",
            "catalog", "classical", "--d", "3",
            "--out", classical_csv.to_str().unwrap(),
        ],
        dir.path(),
    );
    let out = gptnc(&["verdict", "--table", classical_csv.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));

    // Large uncertainty: inconclusive, exit 4.
    let out = gptnc(
        &["verdict", "--table", gbit_csv.to_str().unwrap(), "--epsilon", "0.35"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));

    // Two tables in parallel: nonclassical dominates classical.
    let out = gptnc(
        &[
            "--jobs", "2",
            "verdict",
            "--table", gbit_csv.to_str().unwrap(),
            "--table", classical_csv.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 2);
}

#[test]
fn gptnc_tol_env_switches_to_float_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let rebit = dir.path().join("rebit.json");
    gptnc(&["catalog", "rebit", "--out", rebit.to_str().unwrap()], dir.path());
    // Perturb a state coordinate by 1e-12: exact validation fails, float
    // validation within GPTNC_TOL passes.
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rebit).unwrap()).unwrap();
    v["states"]["vertices"][0] = serde_json::json!([1.000000000001, 0.0, 1.0]);
    let noisy = dir.path().join("noisy.json");
    std::fs::write(&noisy, serde_json::to_string(&v).unwrap()).unwrap();

    let out = gptnc(&["validate", "--gpt", noisy.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = Command::new(env!("CARGO_BIN_EXE_gptnc"))
        .args(["validate", "--gpt", noisy.to_str().unwrap()])
        .env("GPTNC_TOL", "1e-9")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn quotient_accepts_a_relations_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mix.csv");
    std::fs::write(
        &csv,
        "prep,0|M,1|M\nA,1,0\nB,0,1\nmix,1/2,1/2\n",
    )
    .unwrap();
    let relations = dir.path().join("relations.json");
    std::fs::write(
        &relations,
        r#"{"mixtures": [{"target": "mix", "left": "A", "right": "B", "weight": "1/2"}]}"#,
    )
    .unwrap();
    let out = gptnc(
        &[
            "quotient",
            "--table", csv.to_str().unwrap(),
            "--relations", relations.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["dim"], 2);

    // A declared relation the table violates is rejected.
    std::fs::write(
        &relations,
        r#"{"mixtures": [{"target": "mix", "left": "A", "right": "B", "weight": "1/4"}]}"#,
    )
    .unwrap();
    let out = gptnc(
        &[
            "quotient",
            "--table", csv.to_str().unwrap(),
            "--relations", relations.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn quasiprob_from_decomposition_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let rebit = dir.path().join("rebit.json");
    gptnc(&["catalog", "rebit", "--out", rebit.to_str().unwrap()], dir.path());
    // The toy-model pairs: v rows are the response map, h rows the state map.
    let pairs = serde_json::json!([
        {"v": ["1", "1", "1"],   "h": ["1/4", "1/4", "1/4"]},
        {"v": ["1", "-1", "1"],  "h": ["1/4", "-1/4", "1/4"]},
        {"v": ["1", "1", "-1"],  "h": ["1/4", "1/4", "-1/4"]},
        {"v": ["1", "-1", "-1"], "h": ["1/4", "-1/4", "-1/4"]}
    ]);
    let pairs_path = dir.path().join("pairs.json");
    std::fs::write(&pairs_path, serde_json::to_string(&pairs).unwrap()).unwrap();
    let out = gptnc(
        &[
            "quasiprob",
            "--gpt", rebit.to_str().unwrap(),
            "--pairs", pairs_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["positive"], true);
    assert_eq!(v["d"], 4);
}
