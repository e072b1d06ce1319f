use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gramdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SHEARED_PAIR: &str = r#"{"field":"real","vectors":[[1,0,0],[1,1,0]],"x":[1,1,1]}"#;

#[test]
fn distance_csv_for_sheared_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.json", SHEARED_PAIR);
    let out = gramdist(&["distance", &f, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["method", "value", "slack", "tightness"]);
    assert_eq!(rows[1], ["exact", "1", "0", "1"]);
    assert_eq!(rows.len(), 7);
    let frob: f64 = rows[6][1].parse().unwrap();
    assert!((frob - (3.0 - 5.0 / 7f64.sqrt())).abs() < 1e-12);
}

#[test]
fn distance_with_intervals_adds_conditional_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "iv.json",
        r#"{"field":"real","vectors":[[1,0,0],[0,1,0]],"x":[1,1,1],"gammas":[0,0],"Gammas":[2,2]}"#,
    );
    let out = gramdist(&["distance", &f, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let methods: Vec<&str> = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods.len(), 9);
    assert!(methods.contains(&"interval-bombieri"));
}

#[test]
fn hadamard_lists_every_variant() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.json", SHEARED_PAIR);
    let out = gramdist(&["hadamard", &f, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1,1,2,false")), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let ragged = write(
        dir.path(),
        "r.json",
        r#"{"field":"real","vectors":[[1,0],[1]],"x":[1,1]}"#,
    );
    let out = gramdist(&["distance", &ragged]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vectors[1]"));

    let missing = dir.path().join("nope.json");
    assert_eq!(
        gramdist(&["distance", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let dependent = write(
        dir.path(),
        "d.json",
        r#"{"field":"real","vectors":[[1,0],[2,0]],"x":[1,1]}"#,
    );
    assert_eq!(gramdist(&["distance", &dependent]).status.code(), Some(3));

    let orth = write(
        dir.path(),
        "o.json",
        r#"{"field":"real","vectors":[[1,0,0]],"x":[0,1,0]}"#,
    );
    assert_eq!(gramdist(&["distance", &orth]).status.code(), Some(3));

    assert_eq!(
        gramdist(&["verify", "--trials", "30", "--seed", "5"]).status.code(),
        Some(0)
    );
    assert_eq!(
        gramdist(&["verify", "--trials", "30", "--mutate", "0.9", "--checks", "dominance"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(gramdist(&["verify", "--conditioning", "0.5"]).status.code(), Some(2));
    assert_eq!(gramdist(&["verify", "--tol-compare", "2"]).status.code(), Some(2));
}

#[test]
fn verify_trials_zero_is_header_only_csv() {
    let out = gramdist(&["verify", "--trials", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "check,evaluated,failed,worst_slack\n"
    );
}

#[test]
fn verify_output_is_thread_independent() {
    let run = |threads: &str| {
        let out = gramdist(&[
            "verify",
            "--trials",
            "200",
            "--seed",
            "11",
            "--threads",
            threads,
            "--format",
            "json",
        ]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn gen_writes_loadable_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("inst");
    let out = gramdist(&[
        "gen",
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--trials",
        "3",
        "--field",
        "complex",
        "--intervals",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<_> = fs::read_dir(&out_dir).unwrap().collect();
    assert_eq!(files.len(), 3);
    let first = out_dir.join("instance-000000.json");
    assert_eq!(gramdist(&["distance", first.to_str().unwrap()]).status.code(), Some(0));
}
