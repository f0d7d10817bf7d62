//! End-to-end tests of the `idqm` binary: exit codes, manifest emission,
//! and the shape of the CSV/JSON artifacts.

use std::path::PathBuf;
use std::process::Command;

fn idqm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_idqm"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn spectrum_prints_zero_ground_energy() {
    let out = idqm()
        .args(["spectrum", "--params-file"])
        .arg(fixture("case-v.params"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("case V"));
    let row0 = text
        .lines()
        .find(|l| l.trim_start().starts_with("0 "))
        .expect("row for n = 0");
    let e0: f64 = row0.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(e0.abs() < 1e-14, "ground energy {e0} should vanish");
}

#[test]
fn all_committed_fixtures_load() {
    for name in [
        "case-v.params",
        "case-vi.params",
        "case-vii.params",
        "case-viii-k1.params",
        "case-viii-km1.params",
        "case-viii-k0.params",
    ] {
        let out = idqm()
            .args(["spectrum", "--params-file"])
            .arg(fixture(name))
            .output()
            .unwrap();
        assert!(out.status.success(), "{name} failed to load");
    }
}

#[test]
fn malformed_params_file_is_input_error() {
    let dir = std::env::temp_dir().join("idqm-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.params");
    std::fs::write(&path, "case viii\n").unwrap();
    let out = idqm()
        .args(["spectrum", "--params-file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("key = value"));
}

#[test]
fn out_of_range_gamma_is_domain_error() {
    let out = idqm()
        .args(["qdilog", "--gamma", "4.0", "--z", "0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_range_coupling_is_domain_error() {
    let dir = std::env::temp_dir().join("idqm-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty-spectrum.params");
    std::fs::write(
        &path,
        "case = v\ngamma = 0.6\nalpha1 = 0.4\nalpha2 = 0.4\nbeta1 = 0.0\nbeta2 = 0.0\nK = 1\n",
    )
    .unwrap();
    let out = idqm()
        .args(["spectrum", "--params-file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_qdilog_suite_passes_and_writes_artifacts() {
    let dir = std::env::temp_dir().join("idqm-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("report.json");
    let csv = dir.join("report.csv");
    let out = idqm()
        .args(["verify", "--suite", "qdilog", "--json"])
        .arg(&json)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] qdilog-functional-relation"));

    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed["manifest"]["command"], "verify");
    assert_eq!(parsed["manifest"]["parameters"]["suite"], "qdilog");
    assert!(parsed["reports"].as_array().unwrap().len() >= 5);

    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("# manifest "));
    assert!(csv_text.contains("check_id,case,gamma,"));
}

#[test]
fn unknown_suite_is_input_error() {
    let out = idqm()
        .args(["verify", "--suite", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn weight_samples_are_positive() {
    let out = idqm()
        .args(["weight", "--samples", "40", "--params-file"])
        .arg(fixture("case-viii-k1.params"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest "));
    assert!(lines.next().unwrap().starts_with("x,phi0_sq,P0"));
    let mut rows = 0;
    for line in lines.filter(|l| !l.is_empty()) {
        let w: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(w > 0.0, "weight must be positive, got {w} in {line}");
        rows += 1;
    }
    assert_eq!(rows, 40);
}

#[test]
fn qdilog_grid_has_expected_dimensions() {
    let out = idqm()
        .args([
            "qdilog",
            "--gamma-rational",
            "1/4",
            "--z",
            "0.5",
            "--grid",
            "-1:1:5,-0.5:0.5:3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data_rows = text
        .lines()
        .filter(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            fields.len() == 4 && fields.iter().all(|f| f.parse::<f64>().is_ok())
        })
        .count();
    assert_eq!(data_rows, 15);
}
