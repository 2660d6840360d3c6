use std::path::Path;
use std::process::{Command, Output};

use rsfr::output::write_csv;
use rsfr::{run_exact_rate_experiment, run_recover, ExperimentSpec, RecoverConfig, Scale};

const RECOVER: &str = r#"{
    "params": { "n_pulses": 16, "n_freqs": 4, "freq_step": 3e7, "carrier": 9e9, "pri": 2e-5 },
    "mode": "simplified",
    "seed": 11,
    "scene": { "targets": [
        { "velocity_index": 5, "scatterers": [
            { "range_index": 2, "amplitude": [0.7, -0.2] }
        ] }
    ] },
    "algorithm": "ALGO"
}"#;

fn rsfr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsfr")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(rsfr(&["--help"]).status.code(), Some(0));
    assert_eq!(rsfr(&["--version"]).status.code(), Some(0));
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        &["frobnicate"][..],
        &["ccdf", "--bogus"],
        &["ccdf", "--n", "0"],
        &["ccdf", "--mode", "simplified", "--rb", "0.1"],
        &["exact-rate", "--k-range", "5:2"],
        &["hit-rate", "--algos", "nope"],
        &["recover", "--config", "/nonexistent/config.json"],
    ] {
        let out = rsfr(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn ccdf_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs").join("ccdf.csv");
    let out = rsfr(&[
        "ccdf",
        "--n",
        "16",
        "--m",
        "2",
        "--trials",
        "20",
        "--mode",
        "simplified",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    for col in ["quantity", "mode", "threshold", "ccdf", "bound"] {
        assert!(headers.iter().any(|h| h == col), "missing column {col}");
    }
    let rows = reader.records().count();
    // three quantities, one mode
    assert_eq!(rows, 3 * rsfr::ccdf::GRID_POINTS);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("runs").join("ccdf.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "ccdf");
    assert_eq!(manifest["rows"], rows);
    assert_eq!(manifest["spec"]["trials"], 20);
    assert_eq!(manifest["spec"]["params"]["n_pulses"], 16);
}

#[test]
fn sweep_config_round_trip_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        trials: 15,
        k_range: vec![1, 2],
        scatterers_per_target: 4,
        params: rsfr::rsfr_core::RadarParams::x_band(16, 4).unwrap(),
        ..ExperimentSpec::exact_rate(Scale::Desk)
    };
    let path = write(dir.path(), "spec.json", &serde_json::to_string_pretty(&spec).unwrap());
    let out = rsfr(&["exact-rate", "--config", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut expected = Vec::new();
    write_csv(&run_exact_rate_experiment(&spec).unwrap(), &mut expected).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), String::from_utf8(expected).unwrap());

    // a spec of the wrong kind is refused
    assert_eq!(rsfr(&["hit-rate", "--config", &path]).status.code(), Some(1));
}

#[test]
fn flags_override_presets() {
    let out = rsfr(&[
        "hit-rate",
        "--n",
        "16",
        "--m",
        "4",
        "--trials",
        "5",
        "--k-range",
        "1",
        "--snr-range",
        "-5,10",
        "--algos",
        "omp,block-omp",
        "--scatterers",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2 * 2);
    assert!(rows.iter().all(|r| r.iter().any(|f| f == "5")));
}

#[test]
fn recover_round_trip_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "scene.json", &RECOVER.replace("ALGO", "block-omp"));
    let json_out = dir.path().join("result.json");
    let out = rsfr(&["recover", "--config", &path, "--out", json_out.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    let config: RecoverConfig = serde_json::from_str(&RECOVER.replace("ALGO", "block-omp")).unwrap();
    let library = serde_json::to_value(run_recover(&config).unwrap()).unwrap();
    assert_eq!(written, library);
    assert_eq!(written["block_support"], serde_json::json!([5]));
    assert_eq!(written["exact_recovery"], true);

    let starved =
        RECOVER.replace("ALGO", "bp").replace("\"seed\": 11,", "\"seed\": 11, \"solver\": { \"max_iterations\": 1 },");
    let path = write(dir.path(), "starved.json", &starved);
    let out = rsfr(&["recover", "--config", &path]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let partial: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(partial["converged"], false);
}

#[test]
fn analyze_and_bound_print_to_stdout() {
    let out = rsfr(&["analyze", "--n", "16", "--m", "4", "--codes", "0,1,2,3,0,1,2,3,0,1,2,3,0,1,2,3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["codes"].as_array().map(Vec::len), Some(16));

    let out = rsfr(&["bound", "--m", "2", "--n", "64,1073741824"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(reader.records().count(), 2);
}
