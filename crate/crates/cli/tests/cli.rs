use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn csa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_hamilton() {
    let o = csa(&["check", &data("hamilton.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "central simple: yes (rank 16/16)");
}

#[test]
fn split_hamilton_adjoins_i() {
    let o = csa(&["split", &data("hamilton.json")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("tower: Q[x1]/(x1^2 + 1)"), "{s}");
    assert!(s.contains("q = 2"), "{s}");
}

#[test]
fn quat_split_certificate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("split.json");
    let o = csa(&["quat", "split", "1", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q = 2"));
    let v = csa(&["verify", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
}

#[test]
fn every_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["check".into(), data("m2q.json")],
        vec!["decompose".into(), data("m3f5.json")],
        vec!["split".into(), data("hamilton.json")],
        vec!["cprd".into(), data("hamilton.json"), "1,2,0,-1".into()],
        vec!["quat".into(), "recognize".into(), data("m2q.json")],
        vec!["inv".into(), "classify".into(), data("m3q.json"), data("m3q_transpose.json")],
        vec!["inv".into(), "symplectic".into(), data("m2q.json"), data("m2q_transpose.json")],
        vec!["becher".into(), "pair".into(), "2".into(), "1".into(), "1".into(), "2".into(), "1".into()],
    ];
    for (n, args) in runs.iter().enumerate() {
        let out = dir.path().join(format!("c{n}.json"));
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        full.extend(["--out", out.to_str().unwrap()]);
        let o = csa(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v = csa(&["verify", out.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&v.stderr));
    }
}

#[test]
fn partial_results_exit_two() {
    let o = csa(&["quat", "split", "2", "3", "--height-bound", "20"]);
    assert_eq!(o.status.code(), Some(2));
    let o = csa(&["decompose", &data("hamilton.json"), "--probe-budget", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negative_parameters_have_no_point() {
    let o = csa(&["quat", "split", "-1", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no point"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        csa(&["decompose", &data("m2q.json"), "--seed", "7", "--out", out.to_str().unwrap()]);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"field\": }").unwrap();
    let o = csa(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn multiset_comparison() {
    let o = csa(&["becher", "msless", "5,5,4,4,4,4,3,3,3,3,3,3,3,2,2,2,2,2,2,2", "5,5,5,4,3,3,2,2"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = csa(&["becher", "msless", "5,5,5,4,3,3,2,2", "5,5,5,4,3,3,2,2"]);
    assert_eq!(stdout(&o).trim(), "false");
}
