use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kowtype::integrator::{Termination, Trajectory};
use serde_json::Value;

fn kowtype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kowtype"))
        .args(args)
        .env_remove("KOWTYPE_EPS_SING")
        .output()
        .expect("run kowtype")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn catalog_text_and_json() {
    let o = kowtype(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for id in ["S1_REAL", "S1_COMPLEX", "S2_TWOPARAM", "S3_CUBIC"] {
        assert!(text.contains(id), "{id} missing");
    }
    let o = kowtype(&["catalog", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["S1_REAL", "S1_COMPLEX", "S2_TWOPARAM", "S3_CUBIC"]);
    assert!(v.as_array().unwrap().iter().all(|e| e["integrals"].as_array().unwrap().len() == 4));
}

#[test]
fn simulate_writes_files_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).display().to_string();
    let args = |o: &str| {
        vec![
            "simulate".to_string(),
            "--system".into(),
            "S3_CUBIC".into(),
            "--seed".into(),
            "7".into(),
            "--t-end".into(),
            "1".into(),
            "--out".into(),
            o.to_string(),
        ]
    };
    let (a, b) = (out("a"), out("b"));
    for o in [&a, &b] {
        let argv = args(o);
        let r = kowtype(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    }
    for f in ["trajectory.csv", "trajectory.json", "drift.json"] {
        let x = fs::read(Path::new(&a).join(f)).unwrap();
        let y = fs::read(Path::new(&b).join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
    let traj = Trajectory::from_json_str(&fs::read_to_string(Path::new(&a).join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert_eq!(traj.last_time(), 1.0);
    let csv = fs::read_to_string(Path::new(&a).join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), traj.len() + 1);
    let drift: Value = serde_json::from_str(&fs::read_to_string(Path::new(&a).join("drift.json")).unwrap()).unwrap();
    assert_eq!(drift["integrals"].as_array().unwrap().len(), 4);
}

#[test]
fn equilibrium_rows_are_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"system": "S1_REAL", "initial": {"state": [1.5, 0, 0, -0.25, 0, 0]}, "t_end": 2, "sample_dt": 0.5}"#,
    );
    let out = dir.path().join("eq");
    let o = kowtype(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').skip(1).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|w| w[0] == w[1]), "{csv}");
}

#[test]
fn singular_start_exits_3_with_one_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"system": "S1_REAL", "initial": {"state": [0, 1, 0, 0, 0, 0]}}"#);
    let out = dir.path().join("sing");
    let o = kowtype(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["samples"], 1);
    let traj = Trajectory::from_json_str(&fs::read_to_string(out.join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.termination, Termination::Singularity);
}

#[test]
fn malformed_config_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"params": {"g2": 1, "bogus": 2}}"#);
    let o = kowtype(&["simulate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("params.bogus"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), r#"{"t_end": -1}"#);
    let o = kowtype(&["verify", "measure", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t_end"), "{}", stderr(&o));

    let o = kowtype(&["simulate", "--system", "S9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kowtype(&["simulate", "--config", "/nonexistent/run.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eps_sing_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"system": "S1_REAL", "initial": {"state": [0.5, 0, 0, 1, 0, 0]}, "t_end": 0.5}"#,
    );
    let out = dir.path().join("env");
    let base = ["simulate", "--config", &cfg, "--out", out.to_str().unwrap()];
    assert_eq!(kowtype(&base).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_kowtype"))
        .args(base)
        .env("KOWTYPE_EPS_SING", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn verify_separability_passes_with_findings() {
    let dir = tempfile::tempdir().unwrap();
    let o = kowtype(&["verify", "separability", "--json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["summary"]["finding"].as_u64().unwrap() > 0);
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn verify_all_on_the_cubic_system() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kowtype(&["verify", "all", "--system", "S3_CUBIC", "--seed", "0", "--t-end", "5", "--out", out]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().last().unwrap().contains(" 0 failed"), "{text}");
    assert!(!text.contains("ABORT"), "{text}");
    let csv = fs::read_to_string(dir.path().join("quadrature.csv")).unwrap();
    assert!(csv.starts_with("t,"));
}
