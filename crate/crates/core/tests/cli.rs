//! End-to-end runs of the `tlink` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlink"))
        .args(args)
        .env("TLINK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn generate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "r15.txt");
    let out = tlink(&["gen", "--kind", "rotational", "--n", "15", "--out", &g]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("15 105\n"));

    let out = tlink(&["connectivity", "--in", &g, "--exact", "--target", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["measurements"]["connectivity"], 7);

    let out = tlink(&["connectivity", "--in", &g, "--target", "8"]);
    assert_eq!(out.status.code(), Some(1));

    let out = tlink(&["connectivity", "--in", &g, "--sample", "20", "--target", "7", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let out = tlink(&["paths", "--in", &g, "--sources", "0,1", "--sinks", "5,6", "--count", "2", "--minimize"]);
    assert_eq!(out.status.code(), Some(0));

    let out = tlink(&["dominators", "--in", &g, "--find-out"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["measurements"]["vertex"], 0);

    let out = tlink(&["oracle", "--in", &g, "--pairs", "0:7,3:11"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["measurements"]["verdict"]["verdict"], "yes");

    let out = tlink(&["export", "--in", &g]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("->").count(), 105);
}

#[test]
fn link_writes_certificate_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "nr.txt");
    let (cert, trace) = (p(dir.path(), "cert.json"), p(dir.path(), "trace.json"));
    assert!(tlink(&["gen", "--kind", "near-regular", "--n", "251", "--seed", "4", "--out", &g]).status.success());
    let out = tlink(&[
        "link", "--in", &g, "--pairs", "0:1,2:3", "--check-hypotheses", "sample:30", "--cert", &cert, "--trace", &trace,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["paths"].as_array().unwrap().len(), 2);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["events"][0]["procedure"], "dominating_set");
}

#[test]
fn counterexample_with_layout_and_clustered_export() {
    let dir = tempfile::tempdir().unwrap();
    let (g, lay, dot) = (p(dir.path(), "t.txt"), p(dir.path(), "t.layout"), p(dir.path(), "t.dot"));
    let out = tlink(&[
        "counterexample", "--k", "13", "--n", "164", "--unchecked", "--out", &g, "--layout", &lay, "--sample", "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = tlink(&["export", "--in", &g, "--layout", &lay, "--out", &dot]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&dot).unwrap().contains("cluster_y_minus"));
    // Without --unchecked the k >= 42 hypothesis is enforced.
    assert_eq!(tlink(&["counterexample", "--k", "13", "--n", "164"]).status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(tlink(&["gen", "--kind", "nope", "--n", "3"]).status.code(), Some(2));
    assert_eq!(tlink(&["connectivity", "--in", "/nonexistent/file"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "bad.txt");
    std::fs::write(&g, "3 1\n0 0\n").unwrap();
    let out = tlink(&["connectivity", "--in", &g]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(tlink(&["accept", "--criterion", "9"]).status.code(), Some(2));
}

#[test]
fn reports_are_stable_modulo_timings() {
    let run = || {
        let mut v = report(&tlink(&["accept", "--criterion", "7"]));
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    assert_eq!(run(), run());
}
