use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(rel: &str) -> String {
    root().join("corpus").join(rel).to_string_lossy().into_owned()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn sl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl")).args(args).env_remove("SL_COLOR").output().expect("run sl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_prints_transcript() {
    let o = sl(&["run", &corpus("listing1.sl")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "84\n");
    let o = sl(&["run", &corpus("listing5.sl")]);
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn exit_code_reflects_errors_only() {
    assert_eq!(sl(&["check", &corpus("listing11_unambiguous.sl")]).status.code(), Some(0));
    let o = sl(&["check", &corpus("listing11.sl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[E-AMBIGUOUS]"));
    // Warnings alone leave the exit code at 0.
    let o = sl(&["check", "--incoherent-ok", &corpus("listing9.sl")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning[W-INCOHERENT]"));
}

#[test]
fn failing_check_prevents_evaluation() {
    let o = sl(&["run", &corpus("listing9.sl")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sl(&["check"]).status.code(), Some(2));
    assert_eq!(sl(&["check", "--policy", "global", &corpus("listing1.sl")]).status.code(), Some(2));
    assert_eq!(sl(&["check", "--policy", "scoped", "--incoherent-ok", &corpus("listing1.sl")]).status.code(), Some(2));
    assert_eq!(sl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sl(&["explain", "no-position"]).status.code(), Some(2));
}

#[test]
fn unreadable_file_is_an_io_error() {
    let o = sl(&["check", "--json", "/nonexistent/x.sl"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["code"], "E-IO");
}

#[test]
fn json_diagnostics_follow_the_schema() {
    let o = sl(&["check", "--json", "--manifest", &corpus("figure1/manifest")]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ds = v.as_array().unwrap();
    assert!(!ds.is_empty());
    for d in ds {
        for k in ["code", "severity", "module", "span", "message", "related"] {
            assert!(d.get(k).is_some(), "missing {k} in {d}");
        }
        assert!(d["span"]["file"].is_string());
        assert_eq!(d["span"]["start"].as_array().unwrap().len(), 2);
        assert_eq!(d["span"]["end"].as_array().unwrap().len(), 2);
    }
    let conflict = ds.iter().find(|d| d["code"] == "E-LINK-CONFLICT").unwrap();
    assert_eq!(conflict["related"].as_array().unwrap().len(), 1);
}

#[test]
fn json_is_byte_identical_across_processes() {
    let args = ["check", "--json", "--policy", "def-site-disjoint", "--manifest", &corpus("orphans/manifest")];
    let (a, b) = (sl(&args), sl(&args));
    assert_eq!(a.stdout, b.stdout);
    let scoped = ["explain", "--json", &format!("{}:39:27", corpus("listing9.sl"))];
    assert_eq!(sl(&scoped).stdout, sl(&scoped).stdout);
}

#[test]
fn run_json_carries_transcript_and_diagnostics() {
    let o = sl(&["run", "--json", &corpus("listing4.sl")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["transcript"], serde_json::json!(["42"]));
    assert_eq!(v["diagnostics"], serde_json::json!([]));
}

#[test]
fn explain_shows_the_derivation() {
    let o = sl(&["explain", &format!("{}:34:33", corpus("listing5.sl"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let range = out.find("commit: model Iterator[Range[A]]").expect("Range model committed");
    let integral = out.find("goal Integral[Int]").expect("Integral child");
    assert!(range < integral, "{out}");
}

#[test]
fn explain_shows_ambiguity() {
    let o = sl(&["explain", &format!("{}:39:27", corpus("listing9.sl"))]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.matches("candidate model StringConvertible").count(), 2, "{out}");
    assert!(out.contains("E-AMBIGUOUS"));
}

#[test]
fn explain_off_any_goal_is_no_goal() {
    let o = sl(&["explain", &format!("{}:1:3", corpus("listing5.sl"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E-NO-GOAL"));
}

#[test]
fn emit_core_prints_dictionaries() {
    let o = sl(&["check", "--emit-core", &corpus("listing1.sl")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("dict "), "{out}");
    assert!(out.contains("entry "), "{out}");
}

#[test]
fn color_is_opt_in() {
    let plain = sl(&["check", &corpus("listing11.sl")]);
    assert!(!stderr(&plain).contains('\x1b'));
    let colored = Command::new(env!("CARGO_BIN_EXE_sl")).args(["check", &corpus("listing11.sl")]).env("SL_COLOR", "1").output().unwrap();
    assert!(stderr(&colored).contains("\x1b[1;31merror"));
}

#[test]
fn fuel_flag_bounds_evaluation() {
    let o = sl(&["run", "--fuel", "10", &corpus("listing1.sl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E-RT-FUEL"));
}

#[test]
fn depth_flag_bounds_resolution() {
    let o = sl(&["check", "--depth", "3", "--json", &corpus("depth_cycle.sl")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["code"], "E-DEPTH");
    assert!(v[0]["message"].as_str().unwrap().contains("depth limit 3"));
}
