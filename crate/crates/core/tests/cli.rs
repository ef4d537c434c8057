use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const DISK: &str = r#"{"z1":["2","0"],"r":"1"}"#;

fn qdomains(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdomains")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qdomains-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn disk_fluxes_are_exact() {
    let o = qdomains(&["fluxes", "--medium", "axis:1", "--map", DISK]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["Q"], "1");
    assert_eq!(v["Q1"], serde_json::json!(["1/8", "0"]));
    assert_eq!(v["equations"], 6);
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r["residual"] == serde_json::json!(["0", "0"])));
}

#[test]
fn exit_codes() {
    assert_eq!(qdomains(&["fluxes", "--medium", "axis:x", "--map", DISK]).status.code(), Some(2));
    assert_eq!(qdomains(&["fluxes", "--medium", "axis:1", "--map", "{not json"]).status.code(), Some(2));
    assert_eq!(qdomains(&["no-such-command"]).status.code(), Some(2));
    let cusp = r#"{"z1":["0","0"],"r":"1","u":[["4/5","0"]]}"#;
    assert_eq!(qdomains(&["moments", "--map", cusp]).status.code(), Some(3));
    assert_eq!(qdomains(&["pressure-check", "--r", "1", "--rdot", "1", "--z1", "0"]).status.code(), Some(2));
}

#[test]
fn errors_are_reported_as_json() {
    let o = qdomains(&["check-intertwining", "--medium", "dihedral:1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let line = String::from_utf8(o.stderr).unwrap();
    let v: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["error"], "validation");
}

#[test]
fn checks_pass_with_exit_zero() {
    for args in [
        vec!["check-intertwining", "--medium", "dihedral:1,2,1", "--degree", "6"],
        vec!["pressure-check", "--r", "1", "--rdot", "1", "--z1", "2"],
        vec!["ball-check", "--d", "3", "--center", "2,0,0"],
        vec!["verify-identity", "--medium", "axis:2", "--map", DISK],
    ] {
        let o = qdomains(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["passed"], true, "{args:?}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let args =
        ["verify-identity", "--medium", "dihedral:1,1,0", "--map", r#"{"z1":["3","1"],"r":"1","u":[["1/10","1/20"]]}"#];
    let a = qdomains(&args);
    let b = qdomains(&args);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_qdomains")).args(args).env("QDOMAINS_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, env.stdout);
}

#[test]
fn map_round_trips_through_moments() {
    let map = r#"{"z1":["1","1/2"],"r":"3/2","u":[["1/6","0"]]}"#;
    let o = qdomains(&["moments", "--map", map, "--pmax", "1"]);
    let v = stdout_json(&o);
    let targets = serde_json::to_string(&v["moments_over_pi"]).unwrap();
    let back = qdomains(&["moments", "--targets", &targets, "--z1", "1,1/2"]);
    assert_eq!(back.status.code(), Some(0), "{}", String::from_utf8_lossy(&back.stderr));
    let m = &stdout_json(&back)["map"];
    assert_eq!(m["r"], "3/2");
    assert_eq!(m["u"], serde_json::json!([["1/6", "0"]]));
}

#[test]
fn grow_writes_frames_and_polylines() {
    let scenario = r#"{"medium":"axis:1","source":{"z1":["2","0"],"degree":1},
        "schedule":[{"t_start":"0","t_end":"1","q":"1","qj":[["1/20","0"]]}],
        "outputs":{"times":["1/2","1"],"boundary":32}}"#;
    let sc = scratch("grow.json");
    std::fs::write(&sc, scenario).unwrap();
    let out = scratch("frames.jsonl");
    let o =
        qdomains(&["grow", "--scenario", &format!("@{}", sc.display()), "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let frames: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(frames.len(), 2);
    assert_eq!(frames[1]["t"], "1");
    let csv = std::fs::read_to_string(out.with_file_name("frames.frame1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y"));
    assert_eq!(lines.count(), 32);
    let summary: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["conservation"]["passed"], true);
}

#[test]
fn path_check_accepts_equal_histories() {
    let scenario = r#"{"medium":"axis:1","source":{"z1":["2","0"]},
        "schedule_a":[{"t_start":"0","t_end":"2","q":"1","qj":[["1/40","0"]]}],
        "schedule_b":[{"t_start":"0","t_end":"1/2","q":"4","qj":[["1/10","0"]]}],
        "t_final":"2"}"#;
    let o = qdomains(&["path-check", "--scenario", scenario]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["passed"], true);
}

#[test]
fn search_finds_the_quartic_medium() {
    let o = qdomains(&["search-deformed", "--max-n", "2", "--max-k", "4", "--target", r#"[[2,2,"5"],[4,0,"-1"]]"#]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let media: Vec<&str> = v["candidates"].as_array().unwrap().iter().map(|c| c["medium"].as_str().unwrap()).collect();
    assert!(media.contains(&"deformed:1,4:1,0"), "{media:?}");
}
