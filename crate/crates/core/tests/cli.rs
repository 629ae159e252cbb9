use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.gog"))
}

fn gogout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gogout")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decide_finite_and_infinite() {
    let o = gogout(&["decide", fixture_path("s3s3").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("FINITE"));

    let o = gogout(&["decide", fixture_path("rose2").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("INFINITE via free-product kernel"), "{}", stdout(&o));
}

#[test]
fn machine_output_is_json() {
    let o = gogout(&["--machine", "decide", fixture_path("big").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "decide");
    assert_eq!(v["verdict"], "Infinite");
    assert_eq!(v["witness"]["lengths"].as_array().unwrap().len(), 10);
}

#[test]
fn certificate_steps_flag() {
    let o = gogout(&["--machine", "--certificate-steps", "6", "witness", fixture_path("c2c2c2").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"]["lengths"].as_array().unwrap().len(), 6);
}

#[test]
fn validate_reduce_decompose_certify() {
    let big = fixture_path("big");
    let p = big.to_str().unwrap();
    assert!(stdout(&gogout(&["validate", p])).starts_with("valid: 3 vertices, 2 edges"));
    assert!(stdout(&gogout(&["reduce", p])).starts_with("# reduced"));
    assert!(stdout(&gogout(&["decompose", p])).starts_with("minimal edge class"));
    assert!(stdout(&gogout(&["certify-fp", p])).starts_with("PASS"));
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("gogout-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let bad = dir.join("bad.gog");
    std::fs::write(&bad, "vertex v NOPE\n").unwrap();
    let o = gogout(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = gogout(&["--max-group-order", "2", "decide", fixture_path("s3s3").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = gogout(&["--machine", "--max-group-order", "2", "decide", fixture_path("s3s3").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["resource"], true);

    let o = gogout(&["decide", dir.join("missing.gog").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}
