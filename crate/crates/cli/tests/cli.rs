use std::path::Path;
use std::process::{Command, Output};

use jordan_arcs_cli::model::ModelFile;
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-arcs"))
        .args(args)
        .current_dir(dir)
        .env_remove("JORDAN_ARCS_CELL_BUDGET")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn planar_dyadic_build_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--depth", "2", "--out", "m.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2 16 15 28"), "{}", stdout(&o));
    let file =
        ModelFile::from_json(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(file.schema_version, 1);
    assert_eq!(file.counts[2].cells, 16);
    assert_eq!(file.counts[2].connectors, 15);
}

#[test]
fn unit_interval_for_c_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(dir.path(), &["build", "--c", "1", "--out", "i.json"])),
        0
    );
    let file =
        ModelFile::from_json(&std::fs::read_to_string(dir.path().join("i.json")).unwrap()).unwrap();
    assert_eq!(file.counts.len(), 1);
    assert_eq!(file.counts[0].connectors, 0);
    let v = run(dir.path(), &["verify", "--model", "i.json"]);
    assert_eq!(code(&v), 0);
    assert_eq!(stdout(&v).matches("PASS (vacuous)").count(), 5);
}

#[test]
fn c_two_lives_in_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--c", "2", "--depth", "1", "--out", "m.json"]
        )),
        0
    );
    let json: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(json["model"]["copies"], 2);
    assert_eq!(json["model"]["y_ratio"], serde_json::json!(["1", "4"]));
    assert_eq!(
        json["model"]["cells"][1][0]["lo"].as_array().unwrap().len(),
        3
    );
    let svg = run(
        dir.path(),
        &["export", "--model", "m.json", "--format", "svg"],
    );
    assert_eq!(code(&svg), 2);
}

#[test]
fn fresh_build_verifies() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--depth", "3", "--out", "m.json"]
        )),
        0
    );
    let o = run(
        dir.path(),
        &["verify", "--model", "m.json", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("PASS "))
            .count(),
        5
    );
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn corrupted_connector_fails_injectivity() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--depth", "2", "--out", "m.json"]
        )),
        0
    );
    let path = dir.path().join("m.json");
    let mut json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // drag the first connector through the far corner of the square
    json["model"]["connectors"][0]["vertices"]
        .as_array_mut()
        .unwrap()
        .insert(1, serde_json::json!([["1", "1"], ["1", "1"]]));
    std::fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    let o = run(dir.path(), &["verify", "--model", "m.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL injectivity"), "{}", stdout(&o));
}

#[test]
fn json_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--depth", "2", "--seed", "4", "--out", "m.json"]
        )),
        0
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &["export", "--model", "m.json", "--format", "json", "--out", "n.json"]
        )),
        0
    );
    let a = std::fs::read(dir.path().join("m.json")).unwrap();
    let b = std::fs::read(dir.path().join("n.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn svg_draws_cells_and_connectors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--depth", "2", "--out", "m.json"]
        )),
        0
    );
    let o = run(
        dir.path(),
        &["export", "--model", "m.json", "--format", "svg"],
    );
    assert_eq!(code(&o), 0);
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<rect").count(), 16);
    assert_eq!(svg.matches("<polyline").count(), 15);
    assert_eq!(svg.matches("stroke-width=\"2.0000\"").count(), 3);
}

#[test]
fn csv_has_one_row_per_scale() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["build", "--depth", "3", "--out", "m.json"]
        )),
        0
    );
    let o = run(
        dir.path(),
        &[
            "export", "--model", "m.json", "--format", "csv", "--scales", "1:4",
        ],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scale,count,log_inv_scale,log_count");
    assert_eq!(lines.len(), 5);
}

#[test]
fn estimate_reports_expected_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["estimate", "--preset", "cantor", "--out", "c.csv"],
    );
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["slope"].as_f64().unwrap() - 0.6309).abs() < 0.05);
    assert!((report["target"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let w = report["window"].as_array().unwrap();
    let rows = (w[1].as_u64().unwrap() - w[0].as_u64().unwrap() + 1) as usize;
    assert_eq!(csv.lines().count(), rows + 1);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        vec!["build", "--c", "0.5"],
        vec!["build", "--depth", "12"],
        vec!["build", "--ratios", "geometric:2"],
        vec!["build", "--bogus"],
        vec!["estimate", "--preset", "bogus"],
        vec![
            "estimate", "--preset", "cantor", "--depth", "4", "--scales", "3:12",
        ],
        vec!["verify", "--model", "missing.json"],
        vec!["export"],
    ] {
        assert_eq!(code(&run(d, &args)), 2, "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# planar dyadic arc\nc = 1.6309297535714574\ndepth = 3\nout = cfg.json\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &["build", "--config", "run.cfg", "--depth", "1"],
    );
    assert_eq!(code(&o), 0);
    let file = ModelFile::from_json(&std::fs::read_to_string(dir.path().join("cfg.json")).unwrap())
        .unwrap();
    assert_eq!(file.counts.len(), 2);
}

#[test]
fn budget_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_jordan-arcs"))
        .args(["build", "--depth", "3", "--out", "m.json"])
        .current_dir(dir.path())
        .env("JORDAN_ARCS_CELL_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("m.json").exists());
}
