//! Browser bindings. Every export takes plain strings or integers and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use blowup_core::decomp::table_decompose;
use blowup_core::lattice::{BlowupSpace, DivisorClass};
use blowup_core::logfano::{n_plus_2_report, x235_certificate};
use blowup_core::{BigInt, BigRational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_string(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational: '{s}'");
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let b: BigInt = b.trim().parse().map_err(|_| bad())?;
    if b == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

pub fn certificate_json(e1: &str, e2: &str, e3: &str) -> Result<Value, String> {
    let rep = x235_certificate(&rational(e1)?, &rational(e2)?, &rational(e3)?).map_err(|e| e.to_string())?;
    Ok(rep.to_json())
}

pub fn ledger_json(n: usize) -> Result<Value, String> {
    if !(1..=200).contains(&n) {
        return Err(format!("n = {n} outside 1..200"));
    }
    Ok(n_plus_2_report(n).map_err(|e| e.to_string())?.to_json())
}

pub fn decompose_json(n: usize, s: usize, class: &str) -> Result<Value, String> {
    let space = BlowupSpace::nn1(n, s);
    let row: Vec<BigInt> = class
        .split_whitespace()
        .map(|w| w.parse::<BigInt>().map_err(|_| format!("not an integer: '{w}'")))
        .collect::<Result<_, _>>()?;
    if row.len() != space.rank() {
        return Err(format!("expected {} integers (d1 d2 m1 .. m{s}), got {}", space.rank(), row.len()));
    }
    let d = DivisorClass::from_row(&row).map_err(|e| e.to_string())?;
    let out = table_decompose(&space, &d).map_err(|e| e.to_string())?;
    let mut v = out.to_json();
    v["table"] = json!(out.table.to_string());
    v["display"] = json!(d.to_string());
    Ok(v)
}

#[wasm_bindgen]
pub fn x235_certificate_report(e1: &str, e2: &str, e3: &str) -> String {
    to_string(certificate_json(e1, e2, e3))
}

#[wasm_bindgen]
pub fn n_plus_2_ledger(n: usize) -> String {
    to_string(ledger_json(n))
}

#[wasm_bindgen]
pub fn decompose(n: usize, s: usize, class: &str) -> String {
    to_string(decompose_json(n, s, class))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate() {
        let v: Value = serde_json::from_str(&x235_certificate_report("1/2", "10/11", "1/10")).unwrap();
        assert_eq!(v["verdict"], true);
        assert_eq!(v["ledger"]["entries"][2]["discrepancy"], "-1/110");
        let v: Value = serde_json::from_str(&x235_certificate_report("1", "1/2", "1/2")).unwrap();
        assert!(v["error"].is_string());
        assert!(certificate_json("a", "1/2", "1/2").is_err());
        assert!(certificate_json("1/0", "1/2", "1/2").is_err());
    }

    #[test]
    fn ledger() {
        let v: Value = serde_json::from_str(&n_plus_2_ledger(2)).unwrap();
        assert_eq!(v["ledger"]["entries"][0]["discrepancy"], "-19/48");
        assert!(ledger_json(0).is_err());
        assert_eq!(ledger_json(1).unwrap()["verdict"], false);
    }

    #[test]
    fn decomposition() {
        let v: Value = serde_json::from_str(&decompose(4, 6, "2 3 5 5 4 3 3 2")).unwrap();
        assert_eq!(v["parts"].as_array().unwrap().len(), 3);
        assert!(v["table"].as_str().unwrap().contains("E6"));
        assert!(decompose_json(4, 6, "2 3").is_err());
        assert!(decompose_json(2, 4, "1 0 1 1 1 0").is_err());
    }
}
