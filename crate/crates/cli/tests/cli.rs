use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lacuna(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacuna")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("error JSON on stderr")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn lambda_prints_golden_ratio() {
    let o = lacuna(&["lambda", "--l", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.618033988749895");
}

#[test]
fn walsh_shift_diagonal() {
    let o = lacuna(&["walsh-shift", "--n", "6", "--m", "6", "--alpha", "0/1"]);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn order_one_is_a_precondition_error() {
    let o = lacuna(&["lambda", "--l", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "invalid-order");
    assert!(e["message"].as_str().unwrap().contains("order must be ≥ 2"));
}

#[test]
fn unknown_subcommand_exits_64() {
    assert_eq!(lacuna(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(lacuna(&[]).status.code(), Some(64));
}

#[test]
fn bad_flag_value_exits_2() {
    let o = lacuna(&["lambda", "--l", "three"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn config_file_supplies_and_yields_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# critical constant\nl = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = lacuna(&["--config", cfg, "lambda"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.8392867552141612");
    let o = lacuna(&["lambda", "--config", cfg, "--l", "3"]);
    assert_eq!(stdout(&o).trim(), "1.618033988749895");
}

#[test]
fn malformed_config_exits_65() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("a.cfg", "l 3\n"), ("b.cfg", "nonsense = 1\n"), ("c.cfg", "l = x\n")] {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let o = lacuna(&["--config", p.to_str().unwrap(), "lambda"]);
        assert_eq!(o.status.code(), Some(65), "{name}");
        assert_eq!(stderr_json(&o)["error"], "config");
    }
    let o = lacuna(&["--config", "/nonexistent/x.cfg", "lambda", "--l", "3"]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn bad_thread_count_exits_65() {
    let o = Command::new(env!("CARGO_BIN_EXE_lacuna"))
        .args(["lambda", "--l", "3"])
        .env("LACUNA_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn report_round_trips_with_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lacuna(&["counterexample", "--l", "2", "--m-max", "12", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = read_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "counterexample");
    assert_eq!(v["config"]["args"]["m_max"], 12);
    assert_eq!(v["result"]["all_covered"], true);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

fn run_twice(args: &[&str], ext: &str) -> (Vec<u8>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.{ext}"));
        let mut full: Vec<&str> = args.to_vec();
        let s = out.to_str().unwrap().to_string();
        full.extend(["--output", &s]);
        let o = lacuna(&full);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(std::fs::read(&out).unwrap());
    }
    (outs.remove(0), outs.remove(0))
}

#[test]
fn seeded_reruns_are_byte_identical() {
    let (a, b) = run_twice(
        &["extremal", "--kind", "walsh", "--l", "2", "--budget", "6", "--p", "4", "--restarts", "2", "--seed", "11"],
        "json",
    );
    assert_eq!(a, b);
    let (a, b) = run_twice(
        &["matrix-experiment", "--kind", "trig", "--base", "4", "--len", "5", "--l", "2", "--set", "0:99/100", "--seed", "5", "--format", "csv"],
        "csv",
    );
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().contains("\nn,energy,mass,bound,pass\n"));
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}.json"));
        let o = Command::new(env!("CARGO_BIN_EXE_lacuna"))
            .args(["growth", "--kind", "trig", "--base", "2", "--len", "6", "--l", "1", "--restarts", "1", "--seed", "2"])
            .args(["--output", out.to_str().unwrap()])
            .env("LACUNA_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        outs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn csv_reports_carry_header_comments() {
    let o = lacuna(&["riesz", "--freqs", "1,4,16", "--signs", "1,-1,1", "--format", "csv", "--output", "-"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version=1"));
    assert_eq!(lines.next(), Some("# command=riesz"));
    assert!(text.contains("freq,coeff\n"));
    assert!(text.contains("\n0,1\n"));
}

#[test]
fn every_subcommand_runs() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", "--terms", "1,4,17", "--lambda", "3.5"],
        vec!["enumerate", "--base", "4", "--len", "5", "--l", "2", "--variant", "positive-star"],
        vec!["reps", "--base", "4", "--len", "6", "--m", "-12", "--l", "2"],
        vec!["heads", "--base", "4", "--len", "5", "--l", "2"],
        vec!["find-alpha", "--set", "0:7/8,15/16:1", "--exponents", "1,3"],
        vec!["recover", "--coeffs", "6:1.5,10:-2", "--m", "10", "--alpha", "3/8"],
        vec!["norm", "--kind", "walsh", "--coeffs", "6:1,10:1", "--p", "4"],
        vec!["ratio", "--kind", "trig", "--coeffs", "4:1,-16:1:0.5", "--p", "4"],
        vec!["project", "--m", "12", "--freqs", "4,16"],
        vec!["energy", "--kind", "walsh", "--coeffs", "6:1", "--set", "0:1/2"],
        vec!["inverse-check", "--kind", "trig", "--base", "4", "--len", "6", "--l", "2", "--set", "0:99/100"],
        vec!["growth", "--kind", "walsh", "--l", "2", "--budget", "6", "--restarts", "0"],
        vec!["blowup", "--l", "2", "--budgets", "1,4", "--restarts", "0"],
    ];
    for args in cases {
        let o = lacuna(&args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!stdout(&o).trim().is_empty());
    }
    assert_eq!(stdout(&lacuna(&["project", "--m", "12", "--freqs", "4,16"])).trim(), "1/4");
    assert_eq!(stdout(&lacuna(&["recover", "--coeffs", "6:1.5,10:-2", "--m", "10", "--alpha", "3/8"])).trim(), "-2.0");
}

#[test]
fn documents_are_accepted_as_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("w.json");
    std::fs::write(&doc, r#"{"coefficients":[{"value_m":6,"coeff":1.0},{"value_m":12,"coeff":-1.0}]}"#).unwrap();
    let spec = format!("@{}", doc.display());
    let o = lacuna(&["norm", "--kind", "walsh", "--coeffs", &spec, "--p", "2"]);
    assert_eq!(stdout(&o).trim(), format!("{}", 2f64.sqrt()));
}

#[test]
fn support_errors_exit_2() {
    let o = lacuna(&["inverse-check", "--kind", "walsh", "--coeffs", "14:1", "--l", "2", "--set", "0:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "invalid-support");
}
