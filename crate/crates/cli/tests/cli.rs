use std::path::PathBuf;
use std::process::{Command, Output};

use mixvol_core::io::{read_polytopes, read_system};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixvol")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn mv_fixtures() {
    let out = run(&["mv", &fixture("pentagon_equal.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["normalized"], "6");
    assert_eq!(v["euclidean"], "3");
    assert_eq!(v["agree"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);

    let out = run(&["mv", &fixture("two_segments.json"), "--method", "polarization"]);
    assert_eq!(json(&out)["normalized"], "1");

    let out = run(&["mv", &fixture("three_in_plane.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("takes 2 polytopes"));
}

#[test]
fn mv_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"polytopes\": [[[0, 0], [1]]]}").unwrap();
    assert_eq!(run(&["mv", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["mv", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["mv", &fixture("pentagon_equal.json"), "--method", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn mono_equal_and_strict() {
    let out = run(&["mono", &fixture("pentagon_equal.json"), "--equal", &fixture("pentagon.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["strict"], false);

    let out = run(&["mono", &fixture("pentagon_strict.json"), "--equal", &fixture("pentagon.json"), "--compare"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["strict"], true);
    assert_eq!(v["witness"]["kind"], "face");
    assert_eq!(v["witness"]["vertices"], serde_json::json!([["1", "2"], ["2", "1"]]));
    assert_eq!(v["lhs_normalized_mv"], "5");
    assert_eq!(v["rhs_normalized_mv"], "6");
}

#[test]
fn mono_general_with_segments() {
    let out = run(&["mono", &fixture("square_bottom_edge.json"), &fixture("square_pair.json"), "--segments"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["witness"]["kind"], "direction");
    assert_eq!(v["witness"]["u"], serde_json::json!(["0", "1"]));
    assert_eq!(v["cayley_witness"]["simplex"].as_array().unwrap().len(), 4);
}

#[test]
fn mono_deficit() {
    let out = run(&[
        "mono",
        &fixture("square_bottom_edge.json"),
        "--equal",
        &fixture("square.json"),
        "--deficit",
        "(0,1)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["deficit"]["bound"], "1");
    assert_eq!(v["deficit"]["deficit"], "1");
    let out = run(&["mono", &fixture("square_bottom_edge.json"), "--equal", &fixture("square.json"), "--deficit", "(1,1)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mono_containment_violation() {
    let out = run(&["mono", &fixture("pentagon_equal.json"), "--equal", &fixture("square.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("containment"));
}

#[test]
fn system_audits() {
    let out = run(&["system", &fixture("prism.txt")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ber_pass"], false);
    let bad: Vec<&Value> = v["faces"].as_array().unwrap().iter().filter(|f| f["pass"] == false).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["labels"], serde_json::json!([5, 6]));
    assert_eq!(bad[0]["rank_c"], 1);

    let out = run(&["system", &fixture("pentagon_equal.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bkk_bound"], "6");
    assert_eq!(v["volume_bound"], "6");

    let out = run(&["system", &fixture("dense_linear.txt"), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("cramer check") && text.contains("pass"));

    let out = run(&["system", &fixture("prism.json"), "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn system_parse_error_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.txt");
    std::fs::write(&f, "x + y\nx + ?y\n").unwrap();
    let out = run(&["system", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 5"));
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let f = fixture("pentagon_strict.json");
    let one = run(&["--seed", "7", "mv", &f, "--dump-subdivision", a.to_str().unwrap()]);
    let two = run(&["--seed", "7", "mv", &f, "--dump-subdivision", b.to_str().unwrap()]);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let dump: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(dump["cells"].as_array().is_some_and(|c| !c.is_empty()));
    let s1 = run(&["system", &fixture("prism.txt")]);
    let s2 = run(&["system", &fixture("prism.txt")]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn exported_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let s = dir.path().join("s.json");
    run(&["mv", &fixture("pentagon_equal.json"), "--export", c.to_str().unwrap()]);
    let original = read_polytopes(&std::fs::read_to_string(fixture("pentagon_equal.json")).unwrap()).unwrap();
    let back = read_polytopes(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(
        original.iter().map(|p| p.sorted_vertices()).collect::<Vec<_>>(),
        back.iter().map(|p| p.sorted_vertices()).collect::<Vec<_>>()
    );
    run(&["system", &fixture("prism.txt"), "--export", s.to_str().unwrap()]);
    let sys = read_system(&std::fs::read_to_string(fixture("prism.txt")).unwrap()).unwrap();
    assert_eq!(read_system(&std::fs::read_to_string(&s).unwrap()).unwrap(), sys);
}
