//! Text and JSON cone files.
//!
//! ```text
//! # comment
//! dim 3
//! inequalities 2
//! 1 0 0
//! 0 1 0
//! generators 1
//! 1 1 1
//! ```

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::linalg::Row;
use super::RationalCone;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConeFile {
    pub dim: usize,
    pub inequalities: Option<Vec<Row>>,
    pub generators: Option<Vec<Row>>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_cone_text(text: &str) -> Result<ConeFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (no, first) = lines.next().ok_or_else(|| perr(1, "empty cone file"))?;
    let dim = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", d] => d.parse::<usize>().map_err(|_| perr(no, format!("bad dimension '{d}'")))?,
        _ => return Err(perr(no, "expected 'dim D'")),
    };
    if dim == 0 {
        return Err(perr(no, "dimension must be positive"));
    }
    let mut file = ConeFile { dim, ..Default::default() };
    let mut last_line = no;
    while let Some((no, header)) = lines.next() {
        let words: Vec<&str> = header.split_whitespace().collect();
        let (kind, count) = match words[..] {
            [kind @ ("inequalities" | "generators"), r] => {
                (kind, r.parse::<usize>().map_err(|_| perr(no, format!("bad row count '{r}'")))?)
            }
            _ => return Err(perr(no, format!("expected a block header, found '{header}'"))),
        };
        let slot = if kind == "inequalities" { &mut file.inequalities } else { &mut file.generators };
        if slot.is_some() {
            return Err(perr(no, format!("duplicate '{kind}' block")));
        }
        let mut rows = Vec::with_capacity(count);
        last_line = no;
        for _ in 0..count {
            let (no, l) = lines
                .next()
                .ok_or_else(|| perr(last_line + 1, format!("'{kind}' block ends after {} of {count} rows", rows.len())))?;
            last_line = no;
            let r: Row = l
                .split_whitespace()
                .map(|w| w.parse::<BigInt>().map_err(|_| perr(no, format!("not an integer: '{w}'"))))
                .collect::<Result<_>>()?;
            if r.len() != dim {
                return Err(perr(no, format!("row has {} entries, expected {dim}", r.len())));
            }
            rows.push(r);
        }
        *slot = Some(rows);
    }
    let _ = last_line;
    Ok(file)
}

impl ConeFile {
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for (name, block) in [("inequalities", &self.inequalities), ("generators", &self.generators)] {
            if let Some(rows) = block {
                s.push_str(&format!("{name} {}\n", rows.len()));
                for r in rows {
                    let words: Vec<String> = r.iter().map(ToString::to_string).collect();
                    s.push_str(&words.join(" "));
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows = |r: &Vec<Row>| -> Value { Value::Array(r.iter().map(|v| row_json(v)).collect()) };
        let mut obj = json!({ "dim": self.dim });
        if let Some(r) = &self.inequalities {
            obj["inequalities"] = rows(r);
        }
        if let Some(r) = &self.generators {
            obj["generators"] = rows(r);
        }
        obj
    }

    pub fn from_cone(c: &RationalCone) -> Self {
        Self { dim: c.ambient_dim, inequalities: c.inequalities.clone(), generators: c.generators.clone() }
    }
}

/// Integers print as JSON numbers when they fit in an `i64`, else as strings.
pub fn row_json(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(i) => json!(i),
                Err(_) => json!(x.to_string()),
            })
            .collect(),
    )
}

pub fn parse_cone_json(text: &str) -> Result<ConeFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))?;
    let dim = v["dim"].as_u64().filter(|&d| d > 0).ok_or_else(|| perr(1, "missing positive 'dim'"))? as usize;
    let block = |name: &str| -> Result<Option<Vec<Row>>> {
        let Some(b) = v.get(name) else { return Ok(None) };
        let arr = b.as_array().ok_or_else(|| perr(1, format!("'{name}' is not an array")))?;
        arr.iter()
            .enumerate()
            .map(|(i, r)| {
                let r = r.as_array().ok_or_else(|| perr(1, format!("{name}[{i}] is not an array")))?;
                if r.len() != dim {
                    return Err(perr(1, format!("{name}[{i}] has {} entries, expected {dim}", r.len())));
                }
                r.iter()
                    .map(|x| match x {
                        Value::Number(n) => n.as_i64().map(BigInt::from),
                        Value::String(s) => s.parse().ok(),
                        _ => None,
                    }
                    .ok_or_else(|| perr(1, format!("{name}[{i}] has a non-integer entry"))))
                    .collect()
            })
            .collect::<Result<Vec<Row>>>()
            .map(Some)
    };
    Ok(ConeFile { dim, inequalities: block("inequalities")?, generators: block("generators")? })
}
