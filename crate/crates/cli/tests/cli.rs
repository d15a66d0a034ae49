use std::path::PathBuf;
use std::process::{Command, Output};

fn ykr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ykr")).args(args).env_remove("YKR_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn cells(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect()
}

fn tempdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ykr-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn unknot_table() {
    let o = ykr(&["homology", "", "--yify", "--window", "2:*:2"]);
    assert_eq!(o.status.code(), Some(0));
    let mut expected = Vec::new();
    for q in 0..=2 {
        for t in 0..=2 {
            for a in 0..=1 {
                expected.push(format!("{q} {t} {a} 1"));
            }
        }
    }
    assert_eq!(cells(&stdout(&o)), expected);
}

#[test]
fn hopf_latex_is_the_jm2_truncation() {
    let o = ykr(&["homology", "s1^2", "--yify", "--format", "latex", "--window", "1:*:1"]);
    assert_eq!(o.status.code(), Some(0));
    // (1+a)(q+t−qt+a)/((1−q)²(1−t)²) through q^1 t^1.
    assert_eq!(stdout(&o).trim(), "q + t + a + 3qt + 3qa + 3ta + a^{2} + 7qta + 2qa^{2} + 2ta^{2} + 4qta^{2}");
}

#[test]
fn trefoil_reduced_is_q_plus_t_plus_a() {
    let o = ykr(&["homology", "s1^3", "--hkr", "--normalize", "--reduced"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(cells(&out), ["0 0 1 1", "0 1 0 1", "1 0 0 1"]);
    assert!(out.contains("# overall factor Q^-2 A^1 T^-1"));
}

#[test]
fn oracle_frec_matches_hopf_times_one_minus_t_squared() {
    let o = ykr(&["oracle", "frec", "2", "1", "--window", "1:*:1", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    // (1+a)(q+t−qt+a)/(1−q)² through q^1 t^1.
    assert_eq!(stdout(&o).trim(), "q + t + a + qt + 3qa + ta + a^{2} + qta + 2qa^{2}");
}

#[test]
fn oracle_ideal_and_dinv() {
    let o = ykr(&["oracle", "ideal", "J", "2", "2", "--window", "2:0:2", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q^{2} + qt + t^{2} + 3q^{2}t + 3qt^{2} + 6q^{2}t^{2}");
    let o = ykr(&["oracle", "dinv", "2", "--window", "1:0:1", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q + t + qt");
}

#[test]
fn oracle_closed_form() {
    let o = ykr(&["oracle", "closed", "split_product(unknot,unknot)", "--window", "1:0:1", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + 2q + 2t + 4qt");
}

#[test]
fn json_has_the_documented_shape() {
    let o = ykr(&["homology", "s1^2", "--format", "json", "--window", "1:*:1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["label", "basis", "normalization", "reduced", "factor", "window", "valid_cells", "cells"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["basis"], "qta");
    assert!(v["normalization"].is_null());
    assert!(v["cells"].as_array().unwrap().iter().all(|c| c.as_array().unwrap().len() == 4));
    // Normalized Hopf sits on half-integral q-exponents, so it is reported in raw degrees.
    let o = ykr(&["homology", "s1^2", "--format", "json", "--window", "1:*:1", "--normalize"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"], "QAT");
    assert_eq!(v["normalization"]["e"], 2);
}

#[test]
fn coefficients_give_a_bigraded_table() {
    let o = ykr(&["homology", "s1^2", "--coeffs", "0", "1", "--window", "1:*:0", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    // (1+a)²/(1−q)² through q^1.
    assert_eq!(stdout(&o).trim(), "1 + 2q + 2a + 4qa + a^{2} + 2qa^{2}");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let one = ykr(&["homology", "FT(2,2)", "--threads", "1", "--format", "json"]);
    let four = ykr(&["homology", "FT(2,2)", "--threads", "4", "--format", "json"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(ykr(&["homology", "s0"]).status.code(), Some(2));
    assert_eq!(ykr(&["homology", "s1 x"]).status.code(), Some(2));
    assert_eq!(ykr(&["homology", "s1", "--window", "nope"]).status.code(), Some(2));
    assert_eq!(ykr(&["homology", "s1^2", "--coeffs", "1"]).status.code(), Some(2));
    assert_eq!(ykr(&["verify", "everything"]).status.code(), Some(2));
    let o = ykr(&["homology", "s1", "--window", "2:7:2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("window"));
    assert_eq!(ykr(&["homology", "s1", "--window", "3..1:*:2"]).status.code(), Some(3));
}

#[test]
fn verify_suites_pass() {
    for suite in ["markov", "fulltwist", "symmetry"] {
        let o = ykr(&["verify", suite, "--window", "2:*:2"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| l.starts_with("[PASS]") || l.starts_with("[INFO]")));
    }
}

#[test]
fn cache_hit_skips_construction() {
    let dir = tempdir("hit");
    let d = dir.to_str().unwrap();
    let first = ykr(&["homology", "FT(2,3)", "--cache-dir", d, "--stats"]);
    assert!(stderr(&first).contains("cache stored: 1"));
    assert!(stderr(&first).contains("tensor steps: 6"));
    let second = Command::new(env!("CARGO_BIN_EXE_ykr"))
        .args(["homology", "FT(2,3)", "--stats"])
        .env("YKR_CACHE_DIR", d)
        .output()
        .unwrap();
    assert!(stderr(&second).contains("cache hits: 1"));
    assert!(stderr(&second).contains("tensor steps: 0"));
    assert_eq!(first.stdout, second.stdout);
    let off = Command::new(env!("CARGO_BIN_EXE_ykr"))
        .args(["homology", "FT(2,3)", "--stats", "--no-cache"])
        .env("YKR_CACHE_DIR", d)
        .output()
        .unwrap();
    assert!(stderr(&off).contains("tensor steps: 6"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn corrupt_cache_warns_and_recomputes() {
    let dir = tempdir("bad");
    let d = dir.to_str().unwrap();
    let first = ykr(&["homology", "s1^2", "--cache-dir", d]);
    let entry = std::fs::read_dir(&dir).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "{\"version\": 1").unwrap();
    let again = ykr(&["homology", "s1^2", "--cache-dir", d, "--stats"]);
    assert_eq!(again.status.code(), Some(0));
    assert!(stderr(&again).contains("warning: cache entry"));
    assert!(stderr(&again).contains("cache corrupt: 1"));
    assert_eq!(first.stdout, again.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

fn book(chapter: &str) -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src/").to_string() + chapter).unwrap()
}

#[test]
fn book_transcripts_match() {
    let text = book("cli.md");
    let lines: Vec<&str> = text.lines().collect();
    let mut seen = 0;
    for (i, l) in lines.iter().enumerate() {
        let Some(cmd) = l.strip_prefix("$ ykr ") else { continue };
        let expected: Vec<&str> = lines[i + 1..].iter().take_while(|l| !l.is_empty() && !l.starts_with("```")).copied().collect();
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let o = ykr(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), expected, "{cmd}");
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn json_matches_the_book_schema() {
    let text = book("json.md");
    let start = text.find("```json").unwrap() + "```json".len();
    let end = start + text[start..].find("```").unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text[start..end]).unwrap();
    let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    for args in [
        vec!["homology", "s1^3", "--hkr", "--normalize", "--reduced", "--format", "json"],
        vec!["homology", "s1^2", "--coeffs", "0", "1", "--format", "json"],
        vec!["oracle", "dinv", "2", "--format", "json"],
    ] {
        let v: serde_json::Value = serde_json::from_str(&stdout(&ykr(&args))).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        let mut want = required.clone();
        want.sort();
        assert_eq!(keys, want, "{args:?}");
        let window: Vec<&str> = schema["properties"]["window"]["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        for k in window {
            assert!(v["window"][k].is_i64());
        }
    }
}
