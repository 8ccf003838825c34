use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ringlab(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ringlab"));
    cmd.args(args);
    match cache {
        Some(p) => cmd.env("RINGLAB_CACHE", p),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn decompose_defaults_to_minus_one() {
    let out = ringlab(
        &[
            "decompose",
            "--ring",
            "Zn:6",
            "--element",
            "3",
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let t = &v["traces"][0];
    assert_eq!(t["b"], "5");
    assert_eq!(t["idempotent"], "4");
    assert_eq!(t["unit"], "5");
    assert_eq!(t["trace"]["trace_version"], 1);
    assert_eq!(t["verification"]["passed"], true);
}

#[test]
fn decompose_with_explicit_b() {
    let out = ringlab(
        &[
            "decompose",
            "--ring",
            "M2:Zn:2",
            "--element",
            "[[1,0],[0,0]]",
            "--b",
            "[[0,0],[0,1]]",
            "--format",
            "csv",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ring,element,b,idempotent,unit,verified\n"));
    assert!(text.trim_end().ends_with(",true"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["classify", "--ring", "Zn:x"][..],
        &["classify", "--ring", "M3:Zn:3"],
        &["verify", "--suite", "T9.9"],
        &["decompose", "--ring", "Zn:4", "--element", "2"],
        &["hunt", "--property", "ic&&ssp"],
        &["classify"],
    ] {
        let out = ringlab(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = ringlab(&["classify", "--ring", "Zn:3x"], None);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 4"), "{err}");
}

#[test]
fn catalog_tag_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.json");
    std::fs::write(
        &cat,
        r#"[{"spec":"T2:Zn:3","tags":[{"label":"ssp","provenance":"derived"}]}]"#,
    )
    .unwrap();
    let out = ringlab(
        &[
            "verify",
            "--suite",
            "T2.4",
            "--catalog",
            cat.to_str().unwrap(),
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["failures"][0]["message"]
        .as_str()
        .unwrap()
        .contains("ssp"));
}

#[test]
fn hunt_finds_triangular_ring() {
    let out = ringlab(
        &[
            "hunt",
            "--property",
            "ic ∧ ¬ssp",
            "--max-size",
            "27",
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let matches: Vec<&str> = v["hunt"]["matches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_str().unwrap())
        .collect();
    assert!(matches.contains(&"T2:Zn:3"));
}

#[test]
fn env_cache_is_used_and_invisible_in_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = ["classify", "--ring", "M2:Zn:3", "--format", "json"];
    let cold = json(&ringlab(&args, Some(&cache)));
    assert!(cache.exists());
    let warm = json(&ringlab(&args, Some(&cache)));
    assert_eq!(cold["timing"]["cache_misses"], 1);
    assert_eq!(warm["timing"]["cache_hits"], 1);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(cold), strip(warm));
}

#[test]
fn table_output_renders_literals() {
    let out = ringlab(&["classify", "--ring", "T2:Zn:3", "--jobs", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("T2:Zn:3: 27 elements"));
    assert!(text
        .lines()
        .any(|l| l.trim_start().starts_with("ssp") && l.contains("no")));
}
