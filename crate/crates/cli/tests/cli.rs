//! End-to-end runs of the `mcatt` binary on the shipped corpus.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcatt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn check_accepts_the_standard_libraries() {
    let o = run(&["check", &corpus("stdlib.catt"), &corpus("stdlib.mcatt")]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("(a : *) (b : *) (v : a -> b) (c : *) (w : b -> c) ⊢ comp v w : a -> c"), "{out}");
    assert!(out.contains("⊢ prod t u : *"), "{out}");
    // reports keep argument order even though files are checked concurrently
    assert!(out.find("stdlib.catt").unwrap() < out.find("stdlib.mcatt").unwrap());
}

#[test]
fn check_rejects_the_negative_corpus() {
    let cases = [
        ("bad_ps.catt", "NotPs"),
        ("bad_sideconditions.catt", "SideConditionViolation"),
        ("bad_theory.catt", "TheoryViolation"),
    ];
    for (file, code) in cases {
        let o = run(&["check", "--json", &corpus(file)]);
        assert_eq!(o.status.code(), Some(1), "{file}");
        let reports = json_lines(&o);
        assert!(!reports.is_empty());
        for r in &reports {
            assert_eq!(r["schema"], 1);
            assert_eq!(r["verdict"], "REJECT");
            assert_eq!(r["code"], code, "{file}");
            assert!(r["span"]["line"].as_u64().unwrap() > 0);
        }
        let err = String::from_utf8(o.stderr).unwrap();
        let first: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(first, reports[0]);
    }
}

#[test]
fn side_condition_errors_name_the_boundary() {
    let o = run(&["check", "--json", &corpus("bad_sideconditions.catt")]);
    let reports = json_lines(&o);
    assert_eq!(reports[0]["rule"], "eq-side");
    assert_eq!(reports[1]["rule"], "op-side");
    assert!(reports[1]["detail"].as_str().unwrap().contains("target boundary (z : *)"));
}

#[test]
fn json_reports_follow_the_schema() {
    let o = run(&["check", "--json", &corpus("stdlib.catt")]);
    assert!(o.status.success());
    for r in json_lines(&o) {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["schema", "verdict", "judgment", "rule", "span", "detail", "code"] {
            assert!(keys.contains(&k), "{k} missing from {r}");
        }
        assert_eq!(r["verdict"], "ACCEPT");
        assert!(r["code"].is_null());
    }
}

#[test]
fn theory_override_and_usage_errors() {
    let o = run(&["check", "--theory=mcatt", &corpus("bad_theory.catt")]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(run(&["check", "Cargo.toml"]).status.code(), Some(2));
    assert_eq!(run(&["check", "missing.catt"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--theory=hott", &corpus("stdlib.catt")]).status.code(), Some(2));
}

#[test]
fn translations_round_trip_through_check() {
    let dir = std::env::temp_dir().join(format!("mcatt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (src, flag, ext) in [("stdlib.catt", "--dir=desusp", "mcatt"), ("stdlib.mcatt", "--dir=rsusp", "catt")] {
        let o = run(&["translate", flag, &corpus(src)]);
        assert!(o.status.success(), "{src}");
        let out = dir.join(format!("image.{ext}"));
        std::fs::write(&out, stdout(&o)).unwrap();
        let c = run(&["check", out.to_str().unwrap()]);
        assert!(c.status.success(), "{}", stdout(&c));
    }
    assert_eq!(run(&["translate", "--dir=rsusp", &corpus("stdlib.catt")]).status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn adjunction_holds_on_the_corpus() {
    for file in ["stdlib.catt", "stdlib.mcatt"] {
        let o = run(&["adjunction", "--json", &corpus(file)]);
        assert!(o.status.success(), "{file}");
        for r in json_lines(&o) {
            assert_eq!((&r["triangle1"], &r["triangle2"], &r["eta_iso"]), (&Value::Bool(true), &Value::Bool(true), &Value::Bool(true)));
        }
    }
    assert_eq!(run(&["adjunction", &corpus("bad_ps.catt")]).status.code(), Some(1));
}

#[test]
fn enum_ps_lists_contexts_with_a_summary() {
    let o = run(&["enum-ps", "--max-vars=5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "(v0 : *)");
    assert!(lines[4].starts_with("# 4 pasting schemes"));
    let j = json_lines(&run(&["enum-ps", "--max-vars=7", "--json"]));
    assert_eq!(j[0]["count"].as_u64().unwrap() as usize, j[0]["contexts"].as_array().unwrap().len());
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--json"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["disagreements"], 0);
    assert!(r["judgments"].as_u64().unwrap() > 1000);
}
