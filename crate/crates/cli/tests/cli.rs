use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use modelcred::report::{read_curve_csv, Report};
use modelcred_core::resample::PowerPoint;
use modelcred_core::{DistributionFamily, SeedSpec};
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn modelcred(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_modelcred"));
    cmd.args(args).env_remove("MODELCRED_SEED");
    if let Some(s) = seed_env {
        cmd.env("MODELCRED_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = modelcred(args, None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_sample(dir: &TempDir, name: &str, family: DistributionFamily, n: usize, seed: u64) -> String {
    let s = family.sample(n, SeedSpec::new(seed, 0)).unwrap();
    let text: String = s.iter().map(|x| format!("{x}\n")).collect();
    let path = dir.path().join(name);
    std::fs::write(&path, format!("value\n{text}")).unwrap();
    path.display().to_string()
}

fn logistic_file(dir: &TempDir) -> String {
    write_sample(dir, "logistic.csv", DistributionFamily::logistic(0.0, 1.0).unwrap(), 2000, 3)
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn hair_eye_table_report() {
    let r = ok_json(&["table", "--input", &data("hair_eye.csv"), "--alpha", "0.05", "--seed", "7"]);
    assert_eq!(r["report_version"], 1);
    assert_eq!(r["input"]["count"], 592);
    let cat = &r["categorical"];
    assert!((cat["g2"].as_f64().unwrap() - 146.444).abs() < 1e-3);
    assert_eq!(cat["nstar_asy"].as_f64().unwrap().round(), 34.0);
    let n_star = r["estimate"]["n_star"].as_u64().unwrap();
    assert!((29..=35).contains(&n_star), "n_star {n_star}");
    let ci = &cat["nstar_asy_interval"];
    assert!(ci["lower"].as_f64().unwrap() < 34.2 && 34.2 < ci["upper"].as_f64().unwrap());
    assert_eq!(r["estimate"]["low_reliability"], false);
}

#[test]
fn children_income_table_size() {
    let r = ok_json(&["table", "--input", &data("children_income.csv"), "--ci-replicates", "0"]);
    assert_eq!(r["input"]["count"], 25263);
    assert_eq!(r["input"]["rows"], 5);
    assert!(r["categorical"]["nstar_asy_interval"].is_null());
    assert!(r["estimate"]["n_star"].as_u64().is_some());
}

#[test]
fn null_data_gives_infinite_index() {
    let dir = TempDir::new().unwrap();
    let path = write_sample(&dir, "normal.csv", DistributionFamily::normal(2.0, 3.0).unwrap(), 400, 8);
    let r = ok_json(&["nstar", "--input", &path, "--seed", "3"]);
    assert_eq!(r["estimate"]["n_star"], "infinite");
    assert!(r["estimate"]["note"].as_str().unwrap().contains("not distinguishable"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let path = logistic_file(&dir);
    let args = ["nstar", "--input", path.as_str(), "--seed", "11", "--no-timing"];
    let a = modelcred(&args, None);
    let b = modelcred(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for jobs in ["1", "3"] {
        let mut with_jobs = args.to_vec();
        with_jobs.extend(["--jobs", jobs]);
        assert_eq!(modelcred(&with_jobs, None).stdout, a.stdout, "--jobs {jobs}");
    }
}

#[test]
fn timing_is_reported_unless_disabled() {
    let r = ok_json(&["eiss", "--phi-inv", "2", "--draws", "20000"]);
    assert!(r["timing"]["wall_seconds"].as_f64().unwrap() >= 0.0);
    let r = ok_json(&["eiss", "--phi-inv", "2", "--draws", "20000", "--no-timing"]);
    assert!(r["timing"].is_null());
}

#[test]
fn every_command_matches_the_schema() {
    let dir = TempDir::new().unwrap();
    let path = logistic_file(&dir);
    let validator = schema();
    let hair_eye = data("hair_eye.csv");
    let runs: Vec<Vec<&str>> = vec![
        vec!["power", "--input", &path, "--m", "50,200", "--replicates", "200"],
        vec!["power", "--input", &path, "--m", "40", "--test", "pearson", "--cells", "8"],
        vec!["nstar", "--input", &path, "--test", "ks2", "--scheme", "bootstrap"],
        vec!["nstar", "--input", &path, "--test", "sw", "--target-beta", "0.8"],
        vec!["table", "--input", &hair_eye],
        vec!["eiss", "--draws", "50000", "--phi-inv", "2,5"],
        vec!["simulate", "--preset", "table4", "--datasets", "50", "--replicates", "20"],
        vec!["simulate", "--preset", "table5", "--draws", "50000"],
        vec!["simulate", "--preset", "normal-vs-logistic-1s", "--replicates", "200"],
    ];
    for args in runs {
        let r = ok_json(&args);
        let errors: Vec<String> = validator.iter_errors(&r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        let typed: Report = serde_json::from_value(r.clone()).expect("report deserializes");
        assert_eq!(serde_json::to_value(&typed).unwrap(), r);
    }
    let nulled = ok_json(&["nstar", "--input", &path, "--null", "logistic:0:1", "--m-cap", "50"]);
    assert_eq!(nulled["estimate"]["n_star"], "infinite");
    assert!(validator.is_valid(&nulled));
    let mut broken = nulled.clone();
    broken["report_version"] = 2.into();
    assert!(!validator.is_valid(&broken));
}

#[test]
fn csv_curve_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = logistic_file(&dir);
    let common = ["power", "--input", path.as_str(), "--m", "30,300,1500", "--seed", "4"];
    let json = ok_json(&common);
    let points: Vec<PowerPoint> = serde_json::from_value(json["points"].clone()).unwrap();
    let out_path: PathBuf = dir.path().join("curve.csv");
    let mut csv_args = common.to_vec();
    let out_str = out_path.display().to_string();
    csv_args.extend(["--format", "csv", "-o", &out_str]);
    let out = modelcred(&csv_args, None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("m,beta_hat,std_error,"));
    assert_eq!(read_curve_csv(text.as_bytes()).unwrap(), points);
}

#[test]
fn seed_flag_overrides_environment() {
    let args = ["eiss", "--phi-inv", "2", "--draws", "20000", "--no-timing"];
    let from_env = modelcred(&args, Some("5"));
    let r: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(r["seed"]["master_seed"], 5);
    assert_eq!(r["seed"]["source"], "env");

    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "9"]);
    let r: Value = serde_json::from_slice(&modelcred(&flagged, Some("5")).stdout).unwrap();
    assert_eq!(r["seed"]["master_seed"], 9);
    assert_eq!(r["seed"]["source"], "flag");
    assert_eq!(modelcred(&flagged, Some("not a number")).status.code(), Some(0));

    let r: Value = serde_json::from_slice(&modelcred(&args, None).stdout).unwrap();
    assert_eq!(r["seed"]["source"], "default");
    assert_eq!(modelcred(&args, Some("-1")).status.code(), Some(1));

    let env_run = modelcred(&["eiss", "--phi-inv", "2", "--draws", "20000", "--no-timing", "--seed", "5"], None);
    let a: Value = serde_json::from_slice(&env_run.stdout).unwrap();
    let b: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(a["eiss"], b["eiss"]);
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let path = logistic_file(&dir);
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "1,2\n3\n").unwrap();
    let ragged = ragged.display().to_string();
    let hair_eye = data("hair_eye.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["power", "--input", "/nonexistent/x.csv", "--m", "10"],
        vec!["power", "--input", &path, "--m", "10", "--alpha", "0.7"],
        vec!["power", "--input", &path, "--m", "5000"],
        vec!["power", "--input", &path, "--m", "100,50"],
        vec!["power", "--input", &path, "--m", "100", "--replicates", "0"],
        vec!["nstar", "--input", &path, "--target-beta", "1.5"],
        vec!["nstar", "--input", &path, "--replicates-fine", "10"],
        vec!["nstar", "--input", &path, "--m-cap", "9000"],
        vec!["nstar", "--input", &path, "--null", "cauchy:0:1"],
        vec!["table", "--input", &ragged],
        vec!["table", "--input", &hair_eye, "--ci-replicates", "50"],
        vec!["eiss", "--phi-inv", "0.5"],
        vec!["eiss", "--d", "1"],
        vec!["simulate", "--preset", "table5", "--datasets", "60"],
        vec!["--jobs", "0", "eiss"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = modelcred(&args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote a report");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(modelcred(&["--help"], None).status.code(), Some(0));
}

#[test]
fn ingest_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1\nabc\n").unwrap();
    let out = modelcred(&["power", "--input", &bad.display().to_string(), "--m", "1"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn exhausted_search_exits_two_with_curve() {
    let dir = TempDir::new().unwrap();
    let path = write_sample(&dir, "chisq.csv", DistributionFamily::chi_square(1).unwrap(), 5000, 10);
    let out = modelcred(
        &["nstar", "--input", &path, "--test", "sw", "--target-beta", "0.1", "--start-hint", "40"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("search budget exhausted"), "{err}");
    assert!(err.contains("m,beta_hat,std_error"), "{err}");
}

#[test]
fn numeric_failure_exits_three() {
    let out = modelcred(&["eiss", "--phi-inv", "100", "--draws", "2"], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn normal_vs_logistic_presets() {
    let one = ok_json(&["simulate", "--preset", "normal-vs-logistic-1s", "--seed", "20240601"]);
    let n1 = one["estimate"]["n_star"].as_u64().unwrap();
    assert!((340..=630).contains(&n1), "one-sample N* {n1}");
    assert_eq!(one["estimate"]["mode"], "population");
    let two = ok_json(&["simulate", "--preset", "normal-vs-logistic-2s", "--seed", "20240601"]);
    let n2 = two["estimate"]["n_star"].as_u64().unwrap();
    assert!((2100..=3200).contains(&n2), "two-sample N* {n2}");
    let at_1000 = two["points"].as_array().unwrap().iter().find(|p| p["m"] == 1000).unwrap();
    assert!((at_1000["beta_hat"].as_f64().unwrap() - 0.169).abs() < 0.05);
}
