use std::path::Path;
use std::process::{Command, Output};

use bridge_rect::format::load_system;
use bridge_rect::sphere::are_isotopic;
use bridge_rect::catalog;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bridge-rect")).args(args).output().expect("binary runs")
}

fn record(out: &Output) -> Value {
    let line = String::from_utf8_lossy(&out.stdout).lines().next().expect("a JSON record").to_string();
    serde_json::from_str(&line).expect("first line is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn rc_reports_the_failing_fixture() {
    let out = run(&["rc", "@delta85", "@epsilon"]);
    assert_eq!(code(&out), 0);
    let r = record(&out);
    assert_eq!(r["verdict"], "fails");
    assert_eq!(r["realized"].as_array().unwrap().len(), 4);
    assert!(r["missing"].as_array().unwrap().iter().any(|t| t == "({2,3},{1,3})"));
}

#[test]
fn expect_controls_the_exit_code() {
    assert_eq!(code(&run(&["--expect", "fails", "rc", "@delta85", "@epsilon"])), 0);
    assert_eq!(code(&run(&["--expect", "holds", "rc", "@delta85", "@epsilon"])), 1);
    assert_eq!(code(&run(&["--expect", "holds", "rc", "@rc-positive-A", "@rc-positive-B"])), 0);
    assert_eq!(code(&run(&["--expect", "holds", "scan-rc", "@rc-positive-A", "@rc-positive-B"])), 0);
    assert_eq!(code(&run(&["--expect", "isotopic", "isotopic", "@epsilon", "@epsilon"])), 0);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["rc", "@nope", "@epsilon"])), 2);
    assert_eq!(code(&run(&["rc", "/nonexistent/file.bas", "@epsilon"])), 2);
    assert_eq!(code(&run(&["twist", "--circle", "pair17", "@epsilon"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.bas");
    std::fs::write(&garbage, "bridge-arc-system v1\narc one\n").unwrap();
    let out = run(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_system_is_a_contradiction() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bas");
    std::fs::write(
        &bad,
        "bridge-arc-system v1\nsystem bad\narc 1 1 2 U\nevents 1 :\narc 2 1 3 U\nevents 2 :\narc 3 5 6 U\nevents 3 :\nend\n",
    )
    .unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r = record(&out);
    assert_eq!(r["verdict"], "invalid");
    assert_eq!(r["violations"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_names_the_witness() {
    let out = run(&["certify", "@delta85", "@epsilon"]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["certificate"]["witnessArc"], 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("@delta85_2 has no subarc joining @epsilon_1 and @epsilon_3"));
}

fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wallTimeSeconds");
    v
}

#[test]
fn verify_85_is_deterministic_across_thread_counts() {
    let args = |jobs: &'static str| ["verify-85", "--rewires", "1", "--max-crossings", "6", "--witnesses", "--jobs", jobs];
    let one = run(&args("1"));
    let four = run(&args("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(code(&four), 0);
    let (r1, r4) = (record(&one), record(&four));
    assert_eq!(r1["verdict"], "verified");
    assert_eq!(r1["rcFailures"], r1["classesEnumerated"]);
    assert_eq!(without_time(r1), without_time(r4));
}

#[test]
fn enumerate_writes_loadable_classes() {
    let (d1, d4) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (dir, jobs) in [(&d1, "1"), (&d4, "4")] {
        let out = run(&["enumerate", "--rewires", "1", "--max-crossings", "4", "--jobs", jobs, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let listing = |p: &Path| {
        let mut v: Vec<_> = std::fs::read_dir(p).unwrap().map(|e| e.unwrap().path()).collect();
        v.sort();
        v
    };
    let (f1, f4) = (listing(d1.path()), listing(d4.path()));
    assert_eq!(f1.len(), 19);
    for (a, b) in f1.iter().zip(&f4) {
        assert_eq!(std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(b).unwrap());
        load_system(a).unwrap();
    }
    assert!(are_isotopic(&load_system(&f1[0]).unwrap(), &catalog::epsilon()));
}

#[test]
fn twist_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (t, back) = (dir.path().join("t.bas"), dir.path().join("back.bas"));
    assert_eq!(code(&run(&["twist", "--circle", "pair23", "--half-turns", "3", "--out", t.to_str().unwrap(), "@delta85"])), 0);
    assert_eq!(
        code(&run(&["twist", "--circle", "pair23", "--half-turns=-3", "--out", back.to_str().unwrap(), t.to_str().unwrap()])),
        0
    );
    assert!(are_isotopic(&load_system(&back).unwrap(), &catalog::delta85()));
    assert!(!are_isotopic(&load_system(&t).unwrap(), &catalog::delta85()));
}

#[test]
fn render_marks_every_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("pair.svg");
    let out = run(&["render", "@delta85", "@epsilon", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["crossingMarkers"], 24);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(bridge_rect::svg::count_crossing_markers(&text), 24);

    // Without --out the SVG is the only thing on stdout.
    let piped = run(&["render", "@epsilon"]);
    assert!(String::from_utf8_lossy(&piped.stdout).starts_with("<?xml"));
    assert!(String::from_utf8_lossy(&piped.stderr).contains("crossing markers"));
}
