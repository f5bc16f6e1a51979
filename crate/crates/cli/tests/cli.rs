use std::process::{Command, Output};

fn muntz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_muntz")).args(args).output().expect("run muntz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("json report")
}

#[test]
fn verify_muntz_k1_exp_passes() {
    let o = muntz(&["verify", "--case", "muntz-k1", "--function", "exp", "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["entries"][0]["report"]["verdict"], "pass");
    assert!(doc["entries"][0]["report"]["points"].as_array().unwrap().len() >= 6);
}

#[test]
fn class_violation_is_a_configuration_error() {
    let o = muntz(&["verify", "--case", "quot-k3", "--function", "power3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hypothesis"), "{}", stderr(&o));
}

#[test]
fn unknown_names_are_rejected() {
    assert_eq!(muntz(&["verify", "--case", "muntz-k9"]).status.code(), Some(2));
    assert_eq!(muntz(&["verify", "--case", "muntz-k1", "--function", "sinc"]).status.code(), Some(2));
    assert_eq!(muntz(&["verify", "--preset", "zeta3-gamma"]).status.code(), Some(2));
    assert_eq!(muntz(&["verify", "--case", "muntz-k1", "--tol", "1e-13"]).status.code(), Some(2));
    assert_eq!(muntz(&["verify", "--case", "muntz-k1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(muntz(&["bogus"]).status.code(), Some(2));
}

#[test]
fn point_outside_the_strip_is_rejected() {
    let o = muntz(&["verify", "--case", "left-k1", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn impossible_tolerance_fails_and_names_the_point() {
    let o = muntz(&["verify", "--case", "muntz-k1", "--function", "bump", "--s", "0.25", "--tol", "1e-12", "--sieve-limit", "100"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("muntz-k1 bump") && err.contains("s = 0.25"), "{err}");
}

#[test]
fn explicit_points_and_csv() {
    let o = muntz(&["verify", "--case", "quot-k2", "--function", "gaussian", "--s", "0.7,0.8+3i", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("case,function,preset,s_re,s_im"));
    assert!(lines[2].starts_with("quot-k2,gaussian,,8e-1,3e0"));
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn presets_pass() {
    let o = muntz(&["verify", "--preset", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 8);
    assert!(entries.iter().all(|e| e["preset"].is_string() && e["report"]["verdict"] == "pass"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("muntz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    let out = dir.join("report.json");
    std::fs::write(&conf, "cases = left-k1\nfunctions = gaussian\ntol = 1e-13\nsieve-limit = 20000\n").unwrap();
    let bad = muntz(&["verify", "--config", conf.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let o = muntz(&["verify", "--config", conf.to_str().unwrap(), "--tol", "1e-7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["tol"], 1e-7);
    assert_eq!(doc["sieve_limit"], 20000);
    assert_eq!(doc["entries"][0]["case"], "left-k1");
    assert_eq!(doc["entries"][0]["function"], "gaussian");
}

#[test]
fn seeded_runs_repeat() {
    let args = ["verify", "--case", "muntz-k1", "--function", "gaussian", "--seed", "11"];
    let a = muntz(&args);
    let b = muntz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let plain = muntz(&args[..5]);
    assert_ne!(a.stdout, plain.stdout);
}

#[test]
fn dirichlet_at_three() {
    let o = muntz(&["dirichlet", "--s", "3", "--limit", "100000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert!(r["abs_err"].as_f64().unwrap() <= r["tail_bound"].as_f64().unwrap() + 1e-14);
        assert!(r["rel_err"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn dirichlet_guards_the_half_plane() {
    assert_eq!(muntz(&["dirichlet", "--s", "1.5", "--limit", "1000"]).status.code(), Some(0));
    let o = muntz(&["dirichlet", "--s", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Re s <= 1"));
    assert_eq!(muntz(&["dirichlet", "--s", "1"]).status.code(), Some(2));
}

#[test]
fn dirichlet_complex_point() {
    let o = muntz(&["dirichlet", "--s", "2+5i", "--series", "one,mu", "--limit", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["rows"][0]["s_im"], 5.0);
    assert!(doc["rows"][0]["closed_im"].as_f64().unwrap() != 0.0);
}

#[test]
fn residue_routes() {
    let o = muntz(&["residue", "--k", "2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["rows"][0];
    assert!((r["closed_form"].as_f64().unwrap() - 0.577_215_664_901_532_9).abs() < 1e-12);
    assert!(r["difference"].as_f64().unwrap() <= 1e-8);

    let o = muntz(&["residue", "--k", "1", "--x", "2"]);
    let r = &json(&o)["rows"][0];
    assert!((r["closed_form"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((r["numeric"].as_f64().unwrap() - 0.5).abs() < 1e-8);

    let o = muntz(&["residue", "--quotient", "--k", "3", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["rows"][0];
    assert!(r["closed_form"].is_null());
    assert!(r["radius_spread"].as_f64().unwrap() <= 1e-8);

    assert_eq!(muntz(&["residue", "--k", "1", "--pole", "-2", "--x", "1"]).status.code(), Some(0));
    assert_eq!(muntz(&["residue", "--quotient", "--k", "5"]).status.code(), Some(2));
}

#[test]
fn line_identity_defaults() {
    let o = muntz(&["line"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r["rel_err"].as_f64().unwrap() <= 1e-7));
}

#[test]
fn arithmetic_table() {
    let o = muntz(&["table", "--max-n", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,mu,omega,d,d3,d4");
    assert_eq!(lines[12], "12,0,2,6,18,40");
}
