use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpp-lab"))
        .args(args)
        .env_remove("LPP_LAB_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analytics_prints_diagonal_values() {
    let o = lab(&["analytics", "--r", "0.25", "--xi", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pbar=0.5\n"), "{text}");
    assert!(text.contains("gamma=2.0\n"), "{text}");
}

#[test]
fn missing_required_setting_exits_2_with_usage() {
    let o = lab(&["analytics", "--xi", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing required setting `r`"), "{err}");
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(lab(&["shape", "--r", "0.25", "--bogus", "1"]).status.code(), Some(2));
}

#[test]
fn invalid_parameter_exits_2() {
    assert_eq!(lab(&["shape", "--r", "1.5"]).status.code(), Some(2));
}

#[test]
fn exit_tail_writes_one_csv_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tail.csv");
    let o = lab(&[
        "exit-tail", "--r", "0.25", "--n", "30", "--s", "0.5,1,1.5,2", "--reps", "200", "--seed", "7",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)), "{o:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "experiment,quantity,s,estimate,se,n");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.starts_with("exit-tail,exit_tail,")));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("shape.cfg");
    std::fs::write(&cfg, "# small run\nr = 0.25\nn = 10\nreps = 5\nseed = 1\n").unwrap();
    let o = lab(&["shape", "--config", cfg.to_str().unwrap(), "--n", "12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["n"], 12);
    assert_eq!(v["config"]["reps"], 5);
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "r = 0.25\nwidth = 3\n").unwrap();
    assert_eq!(lab(&["shape", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failing_gate_exits_3() {
    // at n = 5 the finite-size mean sits far below the limit
    let o = lab(&["shape", "--r", "0.25", "--n", "5", "--reps", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn same_seed_gives_identical_reports_apart_from_timing() {
    let run = || {
        let o = lab(&["rw", "--reps", "500", "--seed", "9", "--threads", "2"]);
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["wall_clock_seconds"] = 0.into();
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn selftest_is_green_and_byte_stable() {
    let a = lab(&["selftest"]);
    let b = lab(&["selftest"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("FAIL"));
}

#[test]
fn selftest_names_geodesic_ordering_under_tie_rule_mutation() {
    let o = lab(&["selftest", "--swap-tie-rule"]);
    assert_ne!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("FAIL geodesic ordering"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("geodesic ordering"));
}

#[test]
fn fixture_directory_can_be_overridden() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("crossing.json"),
        r#"{"description": "test", "config": {"r": 0.25, "m": 20, "n": 20, "alpha": 0.5}, "pilot": {}, "thresholds": {"s": 5.0, "min_frequency": 0.5}}"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lpp-lab"))
        .args(["crossing", "--r", "0.25", "--n", "20", "--s", "1,5", "--reps", "50"])
        .env("LPP_LAB_FIXTURES", dir.path())
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let gates: Vec<&str> = v["verdicts"].as_array().unwrap().iter().map(|g| g["gate"].as_str().unwrap()).collect();
    assert!(gates.contains(&"crossing_frequency"), "{gates:?}");
}
