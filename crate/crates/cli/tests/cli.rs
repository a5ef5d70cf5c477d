use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn zerofree(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerofree")).args(args).current_dir(dir).output().expect("spawn zerofree")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_prints_the_node_table_and_writes_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["--out", "run", "construct", "--kind", "prop23", "--rho", "1/(1+x)", "-n", "3"], dir.path());
    assert!(o.status.success());
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect();
    assert_eq!(rows, vec![vec!["1", "1", "1"], vec!["2", "3", "3"], vec!["3", "7", "7"]]);
    let doc = json(&dir.path().join("run/config.json"));
    assert_eq!(doc["schema"], "zerofree.product_config.v1");
    assert_eq!(doc["config"]["nodes"].as_array().unwrap().len(), 3);
    let manifest = json(&dir.path().join("run/manifest.json"));
    assert_eq!(manifest["schema"], "zerofree.manifest.v1");
    assert_eq!(manifest["outputs"][0], "config.json");
}

#[test]
fn manifest_replay_reproduces_outputs_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(zerofree(&["--out", "a", "construct", "--kind", "prop25", "--rho", "1/(1+x)", "-n", "2", "--beta", "1.5"], d)
        .status
        .success());
    assert!(zerofree(&["--manifest", "a/manifest.json", "--out", "b"], d).status.success());
    assert_eq!(fs::read(d.join("a/config.json")).unwrap(), fs::read(d.join("b/config.json")).unwrap());

    assert!(zerofree(&["--out", "p", "profile", "--config", "a/config.json", "--grid", "1:2:5"], d).status.success());
    assert!(zerofree(&["--manifest", "p/manifest.json", "--out", "q"], d).status.success());
    assert_eq!(fs::read(d.join("p/profile.csv")).unwrap(), fs::read(d.join("q/profile.csv")).unwrap());
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let beta2 = zerofree(&["construct", "--kind", "prop25", "--rho", "1/(1+x)", "-n", "2", "--beta", "2"], d);
    assert_eq!(beta2.status.code(), Some(64));
    assert_eq!(zerofree(&["no-such-command"], d).status.code(), Some(64));
    assert_eq!(zerofree(&["profile", "--model", "missing.json", "--xs", "1"], d).status.code(), Some(64));
    assert_eq!(zerofree(&["--help"], d).status.code(), Some(0));
}

#[test]
fn construction_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // a constant rate never decays below 1/2, so no node exists
    let o = zerofree(&["construct", "--kind", "prop23", "--rho", "const:0.7", "-n", "3", "--cap", "1e4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn profile_of_the_constant_one_is_identically_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("one.json"), r#"{"type": "constant", "value": [1, 0]}"#).unwrap();
    let o = zerofree(&["--out", "run", "--plot", "profile", "--model", "one.json", "--grid", "1:3:6"], d);
    assert!(o.status.success());
    let mut reader = csv::Reader::from_path(d.join("run/profile.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["x", "logmod", "ratio"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
    }
    assert!(fs::read_to_string(d.join("run/profile.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn dyadic_with_no_zeros_totals_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("zeros.json"), "[]").unwrap();
    let o = zerofree(&["--out", "run", "certify", "dyadic", "--zeros", "zeros.json", "--xs", "2,20,200"], d);
    assert!(o.status.success());
    let doc = json(&d.join("run/dyadic.json"));
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["total"] == 0.0));
}

#[test]
fn operator_certificate_for_zero_coefficients_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("spec.json"),
        r#"{"D": 3, "basis": [[[1, 0], [0, 0], [0, 0]]], "coeff": {"family": "zero"}, "growth": {"c": 1, "m": 0, "alpha": 1}}"#,
    )
    .unwrap();
    let o = zerofree(&["--out", "run", "certify", "operator", "--spec", "spec.json", "--grid", "1:2:6"], d);
    assert!(o.status.success());
    let doc = json(&d.join("run/operator_certificate.json"));
    for cert in doc["report"]["certificates"].as_array().unwrap() {
        assert_eq!(cert["norm_bound"], 1.0);
    }
}

#[test]
fn operator_solve_rank_one_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("spec.json"),
        r#"{"D": 2, "basis": [[[1, 0], [0, 0]]], "coeff": {"family": "constant", "matrix": [[[1, 0]]]}, "growth": {"c": 1, "m": 0, "alpha": 0}}"#,
    )
    .unwrap();
    let o = zerofree(&["operator-solve", "--spec", "spec.json", "--z", "0,0.5"], d);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["solution"]["f"], serde_json::json!([[0.5, 0.0], [0.0, 0.0]]));
}

#[test]
fn eval_and_carleman_on_the_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("exp.json"), r#"{"type": "exp_linear", "coef": [0, 1]}"#).unwrap();
    let o = zerofree(&["eval", "--model", "exp.json", "--z", "0,2"], d);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc["values"][0]["log_modulus"].as_f64().unwrap() + 2.0).abs() < 1e-15);

    let o = zerofree(&["carleman", "--model", "exp.json", "--r", "10,20", "--beta", "1.5"], d);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["report"]["terms"].as_array().unwrap().len(), 2);
    assert_eq!(doc["report"]["deficiency"].as_array().unwrap().len(), 2);
}
