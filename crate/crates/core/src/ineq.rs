//! Effectivity inequalities and base-locus multiplicity bounds.
//!
//! Every functional acts on the row `(d1, d2, m1, .., ms)`. An effectivity
//! functional `f` asserts `f(D) >= 0` for effective `D`. A kappa functional `f`
//! bounds the multiplicity of a fixed subvariety in `Bs|D|` by `max(0, f(D))`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{pair, BlowupSpace, CurveClass, DivisorClass};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Kappa,
    Effectivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearFunctional {
    pub label: String,
    pub coeffs: Vec<BigInt>,
}

impl LinearFunctional {
    fn build(space: &BlowupSpace, label: String, d1: i64, d2: i64, point: impl Fn(usize) -> i64) -> Self {
        let mut coeffs = vec![BigInt::from(d1), BigInt::from(d2)];
        coeffs.extend((0..space.s).map(|i| BigInt::from(point(i))));
        Self { label, coeffs }
    }

    pub fn eval(&self, d: &DivisorClass) -> Result<BigInt> {
        let row = d.to_row();
        if row.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: row.len() });
        }
        Ok(self.coeffs.iter().zip(&row).map(|(a, b)| a * b).sum())
    }
}

/// A functional together with how it is to be read.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub coeffs: Vec<BigInt>,
    pub sense: Sense,
}

impl Inequality {
    pub fn effectivity(f: LinearFunctional) -> Self {
        Self { label: f.label, coeffs: f.coeffs, sense: Sense::Effectivity }
    }

    pub fn kappa(f: &KappaFormula) -> Self {
        Self {
            label: f.functional.label.clone(),
            coeffs: f.functional.coeffs.clone(),
            sense: Sense::Kappa,
        }
    }

    /// The row `a` with `a . x >= 0` meaning the inequality holds.
    pub fn cone_row(&self) -> Vec<BigInt> {
        match self.sense {
            Sense::Effectivity => self.coeffs.clone(),
            Sense::Kappa => self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn holds(&self, d: &DivisorClass) -> bool {
        let v: BigInt = self.cone_row().iter().zip(d.to_row()).map(|(a, b)| a * b).sum();
        !v.is_negative()
    }
}

/// The fixed subvariety a kappa functional refers to. Point indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Target {
    Exceptional { i: usize },
    BilinearSpan { points: Vec<usize> },
    PullbackHyperplane { points: Vec<usize>, exact: bool },
    PullbackCone { t: usize, points: Vec<usize> },
    Bisecant { k: usize },
    BilinearJoin { k: usize, points: Vec<usize> },
    SweptByCurve { curve: Vec<BigInt> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KappaFormula {
    pub functional: LinearFunctional,
    pub target: Target,
}

impl KappaFormula {
    pub fn label(&self) -> &str {
        &self.functional.label
    }
}

impl fmt::Display for LinearFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = match j {
                0 => "d1".to_string(),
                1 => "d2".to_string(),
                _ => format!("m{}", j - 1),
            };
            let mag = c.abs();
            let body = if mag == BigInt::from(1) { name } else { format!("{mag}{name}") };
            let sign = if c.is_negative() { "-" } else { "+" };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{sign} {body}"));
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}: {}", self.label, parts.join(" "))
    }
}

/// JSON export `{label, coeffs, sense}`.
pub fn to_json(ineq: &Inequality) -> serde_json::Value {
    serde_json::json!({
        "label": ineq.label,
        "coeffs": ineq.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "sense": ineq.sense,
    })
}

pub fn evaluate(formula: &KappaFormula, d: &DivisorClass) -> Result<BigInt> {
    formula.functional.eval(d)
}

pub fn kappa(formula: &KappaFormula, d: &DivisorClass) -> Result<BigInt> {
    let v = evaluate(formula, d)?;
    Ok(if v.is_negative() { BigInt::zero() } else { v })
}

fn fmt_set(idx: &[usize]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn check_points(space: &BlowupSpace, idx: &[usize]) -> Result<Vec<usize>> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != idx.len() {
        return Err(Error::InvalidParameter(format!("repeated point index in {{{}}}", fmt_set(idx))));
    }
    if let Some(&bad) = v.iter().find(|&&i| i >= space.s) {
        return Err(Error::InvalidParameter(format!("point index {} outside 1..{}", bad + 1, space.s)));
    }
    Ok(v)
}

fn require_nn1(space: &BlowupSpace, what: &str) -> Result<()> {
    if space.m != space.n + 1 {
        return Err(Error::UnsupportedSpace(format!("{space}: {what} needs m = n+1")));
    }
    Ok(())
}

fn require_s(space: &BlowupSpace, s: usize, what: &str) -> Result<()> {
    require_nn1(space, what)?;
    if space.s != s {
        return Err(Error::UnsupportedSpace(format!("{space}: {what} needs s = {s}")));
    }
    Ok(())
}

/// All subsets of `0..s` of size `k`, lexicographic.
pub fn subsets(s: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s {
            if s - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, s, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= s {
        rec(0, s, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Effectivity inequalities on `X^{n,n+1}_s`, `s <= n+3`.
pub fn effectivity(space: &BlowupSpace) -> Result<Vec<LinearFunctional>> {
    require_nn1(space, "effectivity")?;
    if space.s > space.n + 3 {
        return Err(Error::UnsupportedSpace(format!("{space}: effectivity needs s <= n+3")));
    }
    let (n, s) = (space.n as i64, space.s);
    let mut out = vec![
        LinearFunctional::build(space, format!("eff-d1[n={n},s={s}]"), 1, 0, |_| 0),
        LinearFunctional::build(space, format!("eff-d2[n={n},s={s}]"), 0, 1, |_| 0),
    ];
    for i in 0..s {
        out.push(LinearFunctional::build(
            space,
            format!("eff-line[n={n},s={s},i={}]", i + 1),
            1,
            1,
            |j| if j == i { -1 } else { 0 },
        ));
    }
    for size in 1..=(space.n + 2).min(s) {
        for set in subsets(s, size) {
            out.push(LinearFunctional::build(
                space,
                format!("eff-curve[n={n},s={s},I={}]", fmt_set(&set)),
                n,
                n + 1,
                |j| if set.contains(&j) { -1 } else { 0 },
            ));
        }
    }
    Ok(out)
}

pub fn kappa_exceptional(space: &BlowupSpace, i: usize) -> Result<KappaFormula> {
    check_points(space, &[i])?;
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-exceptional[n={},s={},i={}]", space.n, space.s, i + 1),
            0,
            0,
            |j| if j == i { -1 } else { 0 },
        ),
        target: Target::Exceptional { i },
    })
}

pub fn kappa_bilinear_span(space: &BlowupSpace, idx: &[usize]) -> Result<KappaFormula> {
    let set = check_points(space, idx)?;
    if set.len() < 2 {
        return Err(Error::InvalidParameter("bilinear span needs |I| >= 2".into()));
    }
    let r = set.len() as i64 - 1;
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-bilinear-span[n={},s={},I={}]", space.n, space.s, fmt_set(&set)),
            -r,
            -r,
            |j| if set.contains(&j) { 1 } else { 0 },
        ),
        target: Target::BilinearSpan { points: set },
    })
}

pub fn kappa_pullback_hyperplane(space: &BlowupSpace, idx: &[usize]) -> Result<KappaFormula> {
    require_nn1(space, "pulled-back hyperplane")?;
    let set = check_points(space, idx)?;
    if set.len() != space.n {
        return Err(Error::InvalidParameter(format!("pulled-back hyperplane needs |I| = {}", space.n)));
    }
    let n = space.n as i64;
    let exact = space.n <= space.s && space.s <= space.n + 2;
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-pullback-hyperplane[n={n},s={},I={}]", space.s, fmt_set(&set)),
            -(n - 1),
            -n,
            |j| if set.contains(&j) { 1 } else { 0 },
        ),
        target: Target::PullbackHyperplane { points: set, exact },
    })
}

/// Pullback of the cone over a rational normal curve, `s = n+3`,
/// `|I| = n - 2t`.
pub fn kappa_pullback_cone(space: &BlowupSpace, t: usize, idx: &[usize]) -> Result<KappaFormula> {
    require_s(space, space.n + 3, "pulled-back cone")?;
    let set = check_points(space, idx)?;
    if 2 * t > space.n || set.len() != space.n - 2 * t {
        return Err(Error::InvalidParameter(format!(
            "pulled-back cone needs |I| = n - 2t >= 0, got t={t}, |I|={}",
            set.len()
        )));
    }
    let (n, t, l) = (space.n as i64, t as i64, set.len() as i64);
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-pullback-cone[n={n},s={},t={t},I={}]", space.s, fmt_set(&set)),
            -((n + 1) * t + l - 1),
            -((n + 2) * t + l),
            |j| if set.contains(&j) { t + 1 } else { t },
        ),
        target: Target::PullbackCone { t: t as usize, points: set },
    })
}

pub fn kappa_bisecant(space: &BlowupSpace, k: usize) -> Result<KappaFormula> {
    require_s(space, space.n + 3, "bilinear secant")?;
    if k < 1 {
        return Err(Error::InvalidParameter("bilinear secant needs k >= 1".into()));
    }
    let (n, k) = (space.n as i64, k as i64);
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-bisecant[n={n},s={},k={k}]", space.s),
            -(n * k + k - 1),
            -(n * k + 2 * k - 1),
            |_| k,
        ),
        target: Target::Bisecant { k: k as usize },
    })
}

pub fn kappa_bilinear_join(space: &BlowupSpace, k: usize, idx: &[usize]) -> Result<KappaFormula> {
    require_s(space, space.n + 3, "bilinear join")?;
    let set = check_points(space, idx)?;
    if k < 1 || set.is_empty() {
        return Err(Error::InvalidParameter("bilinear join needs k >= 1 and |I| >= 1".into()));
    }
    let (n, k, l) = (space.n as i64, k as i64, set.len() as i64);
    Ok(KappaFormula {
        functional: LinearFunctional::build(
            space,
            format!("kappa-bilinear-join[n={n},s={},k={k},I={}]", space.s, fmt_set(&set)),
            -(n * k + k + l - 1),
            -(n * k + 2 * k + l - 1),
            |j| if set.contains(&j) { k + 1 } else { k },
        ),
        target: Target::BilinearJoin { k: k as usize, points: set },
    })
}

/// `max(0, -D.C)` for a curve class `C` whose deformations sweep out a fixed
/// divisor.
pub fn kappa_swept_by_curve(space: &BlowupSpace, c: &CurveClass, label: &str) -> Result<KappaFormula> {
    let mut coeffs = Vec::with_capacity(space.rank());
    for basis in 0..space.rank() {
        let mut row = vec![BigInt::zero(); space.rank()];
        row[basis] = BigInt::from(1);
        coeffs.push(-pair(space, &DivisorClass::from_row(&row)?, c)?);
    }
    let mut curve = vec![c.a1.clone(), c.a2.clone()];
    curve.extend(c.excs.iter().cloned());
    Ok(KappaFormula {
        functional: LinearFunctional { label: label.to_string(), coeffs },
        target: Target::SweptByCurve { curve },
    })
}

pub fn effectivity_x346(space: &BlowupSpace) -> Result<Vec<LinearFunctional>> {
    if *space != BlowupSpace::new(3, 4, 6) {
        return Err(Error::UnsupportedSpace(format!("{space}: expected X^{{3,4}}_6")));
    }
    let mut out = vec![LinearFunctional::build(space, "eff-x346-a".into(), 5, 4, |_| -1)];
    for set in subsets(6, 3) {
        out.push(LinearFunctional::build(
            space,
            format!("eff-x346-b[I={}]", fmt_set(&set)),
            6,
            7,
            |j| if set.contains(&j) { -2 } else { -1 },
        ));
    }
    out.push(LinearFunctional::build(space, "eff-x346-c".into(), 11, 14, |_| -3));
    Ok(out)
}
