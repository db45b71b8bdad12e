use std::process::{Command, Output};

fn phasebridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasebridge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_names_every_scenario() {
    let out = phasebridge(&["--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    for name in ["harmonic-correspondence", "commutator", "recoil", "mvt-scaling"] {
        assert!(text.contains(name), "{name} missing from listing");
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out_root = dir.path().to_str().unwrap();
    assert_eq!(phasebridge(&["no-such-scenario", "--out", out_root]).status.code(), Some(1));
    assert_eq!(
        phasebridge(&["recoil", "--out", out_root, "--set", "bogus=1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        phasebridge(&["recoil", "--out", out_root, "--set", "photon_ev=-3"]).status.code(),
        Some(1)
    );
    assert_eq!(phasebridge(&["--out", out_root]).status.code(), Some(1));
    assert_eq!(phasebridge(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(phasebridge(&["--help"]).status.code(), Some(0));
}

#[test]
fn passing_run_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = phasebridge(&["recoil", "mvt-scaling", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("recoil/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["scenario"], "recoil");
    assert!(report["metrics"].as_array().unwrap().iter().all(|m| m["pass"] == true));
    let csv = std::fs::read_to_string(dir.path().join("mvt-scaling/mvt.csv")).unwrap();
    assert!(csv.starts_with("# scenario: mvt-scaling"));
}

#[test]
fn config_file_selects_scenario_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# recoil at a lower photon energy\nscenario = recoil\nphoton_ev = 2.5\n")
        .unwrap();
    let out = phasebridge(&[
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    // The reference ratio belongs to the 3.1 eV case, so this run misses it.
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    let report = std::fs::read_to_string(dir.path().join("recoil/report.json")).unwrap();
    assert!(report.contains("\"photon_ev\": \"2.5\""));
}
