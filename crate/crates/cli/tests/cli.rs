use std::process::Command;

use blowup_core::cone::{parse_cone_json, parse_cone_text};
use serde_json::Value;

fn blowup(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_blowup")).args(args).output().expect("spawn blowup");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = blowup(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}")))
}

/// Parses the integer rows of an orbit table, negating the exceptional
/// columns back to multiplicities.
fn table_rows(text: &str) -> Vec<Vec<i64>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.contains("orbits"))
        .map(|l| {
            let v: Vec<i64> = l.split_whitespace().map(|w| w.parse().unwrap()).collect();
            v.iter().enumerate().map(|(j, x)| if j < 2 { *x } else { -*x }).collect()
        })
        .collect()
}

fn json_rows(v: &Value) -> Vec<Vec<i64>> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["class"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect())
        .collect()
}

#[test]
fn eff_x235_table() {
    let (code, out, _) = blowup(&["eff", "--space", "2x3", "--points", "5", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("6 orbits, 32 classes"));
    assert!(out.contains(" 1  2 -2 -2 -2 -2 -2"));
    assert!(out.contains(" 2  0 -1 -1 -1 -1 -1"));
    let (_, v) = json(&["eff", "--space", "2x3", "--points", "5"]);
    assert_eq!(table_rows(&out), json_rows(&v));
    assert_eq!(v["total"], 32);
}

#[test]
fn mov_table_json_parity() {
    let (code, out, _) = blowup(&["mov", "--space", "3x4", "--points", "5"]);
    assert_eq!(code, 0);
    let (_, v) = json(&["mov", "--space", "3x4", "--points", "5"]);
    assert_eq!(table_rows(&out), json_rows(&v));
    let (code, _, err) = blowup(&["mov", "--space", "6x7", "--points", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("--allow-large"));
}

#[test]
fn decompose_golden() {
    let args = ["decompose", "--space", "4x5", "--points", "6", "--class", "2 3 5 5 4 3 3 2"];
    let (code, out, _) = blowup(&args);
    assert_eq!(code, 0);
    assert!(out.contains("2 x (H1 - E1 - E2 - E3 - E4)"));
    assert!(out.contains("2 x (H2 - E1 - E2 - E3 - E5 - E6)"));
    assert!(out.contains("1 x (H2 - E1 - E2 - E4 - E5)"));
    let (_, v) = json(&args);
    let mults: Vec<u64> = v["parts"].as_array().unwrap().iter().map(|p| p["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults, vec![2, 2, 1]);
    let (code, _, err) = blowup(&["decompose", "--space", "4x5", "--points", "6", "--class", "2 3 5"]);
    assert_eq!(code, 2);
    assert!(err.contains("expected 8"));
    let (code, _, _) = blowup(&["decompose", "--space", "2x3", "--points", "4", "--class", "1 0 1 1 1 0"]);
    assert_eq!(code, 1);
}

#[test]
fn logfano_verdicts() {
    let (code, out, _) = blowup(&["logfano", "--family", "n+2", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("-19/48"));
    assert!(out.trim_end().ends_with("verdict: true"));
    let (_, v) = json(&["logfano", "--family", "n+2", "--n", "2"]);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["ledger"]["entries"][0]["discrepancy"], "-19/48");
    assert_eq!(blowup(&["logfano", "--family", "n+2", "--n", "1"]).0, 1);
    let (code, out, _) = blowup(&["logfano", "--family", "x235", "--eps", "1/2,10/11,1/10"]);
    assert_eq!(code, 0);
    for v in ["27/55", "87/110", "-1/110", "15/22", "119/110"] {
        assert!(out.contains(v), "{v}");
    }
    assert_eq!(blowup(&["logfano", "--family", "x235", "--eps", "1,1/2,1/2"]).0, 2);
    assert_eq!(blowup(&["logfano", "--family", "x235", "--eps", "1/2"]).0, 2);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(blowup(&["verify", "x235-eff"]).0, 0);
    assert_eq!(blowup(&["verify", "x346-eff"]).0, 0);
    assert_eq!(blowup(&["verify", "mov-n+2:3"]).0, 0);
    let (code, out, _) = blowup(&["verify", "x235-mov"]);
    assert_eq!(code, 1);
    assert!(out.contains("MISMATCH"));
    assert_eq!(blowup(&["verify", "nope"]).0, 2);
    assert_eq!(blowup(&["verify", "mov-n+2:9"]).0, 2);
    assert!(blowup(&["verify", "--list"]).1.contains("x346-eff"));
}

#[test]
fn fixture_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x235-eff.cone"), "dim 7\ngenerators 1\n0 0 -1 0 0 0 0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(["verify", "x235-eff"])
        .env("BLOWUP_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cone_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.cone");
    std::fs::write(&p, "# square cone\ndim 3\ngenerators 4\n1 0 0\n1 1 0\n1 1 1\n1 0 1\n").unwrap();
    let path = p.to_str().unwrap();
    let (code, text, _) = blowup(&["cone", path]);
    assert_eq!(code, 0);
    let (_, v) = json(&["cone", path]);
    let from_text = parse_cone_text(&text).unwrap();
    let from_json = parse_cone_json(&v.to_string()).unwrap();
    assert_eq!(from_text, from_json);
    assert_eq!(from_text.inequalities.as_ref().unwrap().len(), 4);
    let jp = dir.path().join("c.json");
    std::fs::write(&jp, v.to_string()).unwrap();
    assert_eq!(blowup(&["cone", jp.to_str().unwrap()]).1, text);

    let h = dir.path().join("h.cone");
    std::fs::write(&h, "dim 2\ngenerators 2\n1 0\n1 3\n").unwrap();
    let (code, out, _) = blowup(&["hilbert", h.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "hilbert 4\n1 0\n1 1\n1 2\n1 3\n");

    let bad = dir.path().join("bad.cone");
    std::fs::write(&bad, "dim 2\ngenerators 2\n1 0\n1 x\n").unwrap();
    let (code, _, err) = blowup(&["cone", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    assert_eq!(blowup(&["cone", "/nonexistent.cone"]).0, 2);
}

#[test]
fn kappa_and_secant() {
    let (code, v) = json(&["kappa", "--space", "2x3", "--points", "5", "--class", "1 0 1 1 1 0 0"]);
    assert_eq!(code, 0);
    let vals: Vec<&str> = v["kappa"].as_array().unwrap().iter().map(|k| k["value"].as_str().unwrap()).collect();
    assert!(vals.contains(&"1"), "{v}");
    let (code, out, _) = blowup(&["secant", "--n", "2", "--k", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("vanishing order along C: 2"));
    let (_, v) = json(&["secant", "--n", "4", "--k", "2"]);
    assert_eq!(v["telescoping_ok"], true);
    assert_eq!(v["vanishing_order"], Value::Null);
}

#[test]
fn output_is_stable() {
    let args = ["eff", "--space", "3x4", "--points", "6", "--format", "json"];
    assert_eq!(blowup(&args).1, blowup(&args).1);
}

#[test]
fn usage_errors() {
    assert_eq!(blowup(&[]).0, 2);
    assert_eq!(blowup(&["eff", "--space", "2by3", "--points", "5"]).0, 2);
    assert_eq!(blowup(&["frobnicate"]).0, 2);
    assert_eq!(blowup(&["eff", "--space", "2x3", "--points", "9"]).0, 2);
    assert_eq!(blowup(&["--help"]).0, 0);
}
