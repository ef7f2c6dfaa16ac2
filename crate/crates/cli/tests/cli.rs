//! End-to-end tests of the CLI surface: exit codes, file round trips, and
//! reproducibility of artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bdldp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdldp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run bdldp")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bdldp-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kopt_prints_expected_set() {
    let dir = tmpdir("kopt");
    let doc = stdout_json(&bdldp(&["kopt", "--v", "8", "--e-eps", "3"], &dir));
    assert_eq!(doc["k_opt"], serde_json::json!([2]));
    assert_eq!(doc["version"], "0.1.0");
}

#[test]
fn build_verify_roundtrip_is_lossless() {
    let dir = tmpdir("roundtrip");
    let out = bdldp(
        &["design", "build", "--family", "paley", "--key", "11", "--out", "paley11.json"],
        &dir,
    );
    assert!(out.status.success());
    let first = std::fs::read_to_string(dir.join("paley11.json")).unwrap();

    let verify = stdout_json(&bdldp(&["design", "verify", "paley11.json"], &dir));
    assert_eq!(verify["classification"]["kind"], "BlockDesign");
    assert_eq!(verify["classification"]["v"], 11);
    assert_eq!(verify["classification"]["k"], 5);

    // Round trip: parse and re-serialize reproduces the bytes.
    let parsed = bdldp_core::IncidenceStructure::from_json(&first).unwrap();
    assert_eq!(parsed.to_json(), first);
}

#[test]
fn verify_broken_file_exits_one_with_neither() {
    let dir = tmpdir("broken");
    // Fano with one incidence removed from row 0.
    let broken = r#"{"v":7,"b":7,"rows":[[1,3],[0,3,4],[2,3,6],[0,1,2],[1,4,6],[0,5,6],[2,4,5]]}"#;
    std::fs::write(dir.join("broken.json"), broken).unwrap();
    let out = bdldp(&["design", "verify", "broken.json"], &dir);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["classification"]["kind"], "Neither");
}

#[test]
fn bad_key_exits_one_with_message() {
    let dir = tmpdir("badkey");
    let out = bdldp(
        &["design", "build", "--family", "paley", "--key", "13", "--out", "x.json"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("paley"), "stderr: {err}");
    assert!(err.contains("mod 4"), "stderr: {err}");
}

#[test]
fn usage_error_exits_two() {
    let dir = tmpdir("usage");
    let out = bdldp(&["kopt", "--v", "8"], &dir); // missing eps
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn risk_accepts_rpbd_and_block_params() {
    let dir = tmpdir("risk");
    let doc = stdout_json(&bdldp(
        &["risk", "--params", "2000,5461,1365,341", "--e-eps", "3"],
        &dir,
    ));
    let ratio = doc["report"]["ratio"].as_f64().unwrap();
    assert!((ratio - 1.00085).abs() < 2e-4);
    assert_eq!(doc["report"]["b"], "5461");

    let doc = stdout_json(&bdldp(
        &["risk", "--params", "7,7,3,3,1", "--e-eps", "3", "--p", "uniform"],
        &dir,
    ));
    let worst = doc["report"]["risk_times_n"].as_f64().unwrap();
    let at_p = doc["risk_times_n_at_p"].as_f64().unwrap();
    assert!((worst - at_p).abs() < 1e-9);
    assert!((worst - 18.1071428571).abs() < 1e-6);
}

#[test]
fn search_ranks_paper_example() {
    let dir = tmpdir("search");
    let doc = stdout_json(&bdldp(
        &["search", "--v", "2000", "--e-eps", "3", "--families", "projective_geometry=4"],
        &dir,
    ));
    let top = &doc["candidates"][0];
    assert_eq!(top["report"]["b"], "5461");
    assert_eq!(top["recipe"]["kind"], "truncate");
    assert_eq!(top["recipe"]["from_v"], 5461);
}

#[test]
fn simulate_design_file_end_to_end() {
    let dir = tmpdir("simulate");
    assert!(bdldp(
        &["design", "build", "--family", "trivial", "--key", "4", "--out", "rr4.json"],
        &dir,
    )
    .status
    .success());
    let doc = stdout_json(&bdldp(
        &[
            "simulate", "--design", "rr4.json", "--e-eps", "3", "--p", "uniform", "--n", "50",
            "--trials", "400", "--seed", "7",
        ],
        &dir,
    ));
    let z = doc["z"].as_f64().unwrap();
    assert!(z.abs() <= 4.0, "z = {z}");
    assert_eq!(doc["config"]["sim"]["n"], 50);
    // Same config reruns byte-identically.
    let again = stdout_json(&bdldp(
        &[
            "simulate", "--design", "rr4.json", "--e-eps", "3", "--p", "uniform", "--n", "50",
            "--trials", "400", "--seed", "7",
        ],
        &dir,
    ));
    assert_eq!(doc, again);
}

#[test]
fn sweep_csv_schema_and_meta() {
    let dir = tmpdir("sweep");
    let out = bdldp(
        &[
            "sweep", "--e-eps", "3", "--vmin", "2000", "--vmax", "2002", "--proposed",
            "projective_geometry=4,quartic_nonzero,quartic_with_zero", "--baseline",
            "projective_geometry=4", "--out", "s.csv",
        ],
        &dir,
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("s.csv")).unwrap();
    assert!(csv.starts_with("v,method,risk_ratio,b,log2_b\n"));
    assert!(csv.contains("2000,baseline,"));
    assert!(csv.contains("2000,proposed,"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("s.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["tool"], "bdldp");
    assert_eq!(meta["config"]["vmin"], 2000);
}

#[test]
fn reproduce_is_byte_identical() {
    let dir = tmpdir("reproduce");
    for sub in ["a", "b"] {
        let out = bdldp(&["reproduce", "paper-example", "--out-dir", sub], &dir);
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.join("a/paper_example.json")).unwrap();
    let b = std::fs::read(dir.join("b/paper_example.json")).unwrap();
    assert_eq!(a, b);

    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let result = &doc["result"];
    assert_eq!(result["pgr_truncation"]["report"]["b"], "5461");
    assert_eq!(result["quartic_truncation"]["report"]["b"], "2917");
    assert!(result["ss_baseline"]["log10_b"].as_f64().unwrap() > 486.0);
}

#[test]
fn derived_and_truncate_builds() {
    let dir = tmpdir("transforms");
    let out = bdldp(
        &[
            "design", "build", "--family", "projective_geometry", "--key", "2,3", "--derived",
            "--out", "derived.json",
        ],
        &dir,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["classification"]["v"], 3);
    assert_eq!(doc["classification"]["b"], 6);

    let out = bdldp(
        &[
            "design", "build", "--family", "projective_geometry", "--key", "2,3", "--truncate",
            "5", "--out", "trunc.json",
        ],
        &dir,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["classification"]["kind"], "Rpbd");
    assert_eq!(doc["classification"]["v"], 5);
}
