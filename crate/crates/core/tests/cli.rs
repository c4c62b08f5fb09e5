use std::process::{Command, Output};

fn lagmesh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagmesh"))
        .args(args)
        .env("LAGMESH_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_text() {
    let out = lagmesh(&["solve", "--lambda", "-1", "--mesh-points", "60", "--states", "2", "--precision", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("lambda = -1  N = 60  P = 60  variant = gauss  h = 1"));
    assert!(text.contains("E0   0.620927029825748"));
    assert!(text.contains("time "));
}

#[test]
fn solve_json() {
    let out = lagmesh(&[
        "solve", "--lambda", "1", "--mesh-points", "2", "--states", "2", "--precision", "40",
        "--variant", "exact", "--check-increment", "off", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["variant"], "exact");
    assert_eq!(v["energies"].as_array().unwrap().len(), 2);
    assert!(v["energies"][1]["digits"].as_str().unwrap().starts_with("0.5625000000"));
    assert!(v["runtime_seconds"]["per_stage"]["roots"].is_number());
}

#[test]
fn vectors_and_matrix_dump() {
    let dir = std::env::temp_dir().join(format!("lagmesh-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("h.txt");
    let out = lagmesh(&[
        "solve", "--lambda", "1", "--mesh-points", "12", "--states", "3", "--precision", "40",
        "--vectors", "--format", "json", "--no-timings", "--dump-matrix", dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("runtime_seconds").is_none());
    for k in 0..3 {
        assert_eq!(v["energies"][k]["nodes"], k);
    }
    let text = std::fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(' ').collect();
    assert_eq!(&header[..3], &["12", "40", "gauss"]);
    assert_eq!(lines.count(), 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_with_override() {
    let dir = std::env::temp_dir().join(format!("lagmesh-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# test run\nlambda = -1\nmesh_points = 30\nstates = 1\nprecision = 50\nformat = json\n").unwrap();
    let out = lagmesh(&["--config", cfg.to_str().unwrap(), "solve", "--mesh-points", "40", "--no-timings"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mesh_points"], 40);
    assert_eq!(v["lambda"], "-1");
    assert_eq!(v["precision"], 50);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_failures_exit_1() {
    for args in [
        &["solve", "--lambda", "1"][..],
        &["solve", "--lambda", "1", "--mesh-points", "10", "--states", "6"],
        &["solve", "--lambda", "x", "--mesh-points", "10"],
        &["solve", "--lambda", "1", "--mesh-points", "10", "--variant", "fancy"],
        &["solve", "--lambda", "1", "--mesh-points", "10", "--precision", "12"],
        &["study", "--lambda", "1", "--mesh-list", "30,20"],
        &["check"],
        &["frobnicate"],
    ] {
        let out = lagmesh(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_lagmesh"))
        .args(["solve", "--lambda", "1", "--mesh-points", "10", "--states", "1"])
        .env("LAGMESH_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn study_and_check() {
    let out = lagmesh(&["study", "--lambda", "-1", "--state", "0", "--mesh-list", "25,50", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["matched_decimal_places"], 8);
    assert_eq!(rows[1]["matched_decimal_places"], 14);

    let out = lagmesh(&["check", "--against-paper", "--max-mesh-points", "25"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 3);

    // the exact kinetic matrix misses the deep double well at 25 points
    let out = lagmesh(&["check", "--against-paper", "--max-mesh-points", "25", "--variant", "exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL lambda=16 state=0 N=25"));
}
