//! Divisor and curve lattices of `X^{n,m}_s`.
//!
//! A divisor is stored as `D = d1*H1 + d2*H2 - sum m_i E_i` and a curve as
//! `C = a1*l1 + a2*l2 - sum b_i e_i`, so `H_i.l_j = delta_ij` and
//! `E_i.e_j = -delta_ij` give `D.C = d1*a1 + d2*a2 - sum m_i*b_i`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupSpace {
    pub n: usize,
    pub m: usize,
    pub s: usize,
}

impl BlowupSpace {
    pub fn new(n: usize, m: usize, s: usize) -> Self {
        Self { n, m, s }
    }

    /// `X^{n,n+1}_s`, the family most computations live on.
    pub fn nn1(n: usize, s: usize) -> Self {
        Self::new(n, n + 1, s)
    }

    /// Rank of the divisor lattice.
    pub fn rank(&self) -> usize {
        self.s + 2
    }

    pub fn with_points(&self, s: usize) -> Self {
        Self::new(self.n, self.m, s)
    }
}

impl fmt::Display for BlowupSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^{{{},{}}}_{}", self.n, self.m, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub d1: BigInt,
    pub d2: BigInt,
    pub mults: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(d1: impl Into<BigInt>, d2: impl Into<BigInt>, mults: Vec<BigInt>) -> Self {
        Self { d1: d1.into(), d2: d2.into(), mults }
    }

    pub fn zero(s: usize) -> Self {
        Self::new(0, 0, vec![BigInt::zero(); s])
    }

    /// Parses the serialization row `[d1, d2, m1, .., ms]`.
    pub fn from_row(row: &[BigInt]) -> Result<Self> {
        if row.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: row.len() });
        }
        Ok(Self::new(row[0].clone(), row[1].clone(), row[2..].to_vec()))
    }

    pub fn from_i64(row: &[i64]) -> Self {
        let row: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_row(&row).expect("row has at least two entries")
    }

    pub fn to_row(&self) -> Vec<BigInt> {
        let mut row = Vec::with_capacity(self.mults.len() + 2);
        row.push(self.d1.clone());
        row.push(self.d2.clone());
        row.extend(self.mults.iter().cloned());
        row
    }

    pub fn s(&self) -> usize {
        self.mults.len()
    }

    pub fn h1(s: usize) -> Self {
        Self::new(1, 0, vec![BigInt::zero(); s])
    }

    pub fn h2(s: usize) -> Self {
        Self::new(0, 1, vec![BigInt::zero(); s])
    }

    /// The exceptional divisor `E_i` (stored multiplicity `-1`).
    pub fn exceptional(s: usize, i: usize) -> Self {
        let mut d = Self::zero(s);
        d.mults[i] = BigInt::from(-1);
        d
    }

    /// `d1*H1 + d2*H2 - sum_{i in idx} E_i`.
    pub fn linear(s: usize, d1: i64, d2: i64, idx: &[usize]) -> Self {
        let mut d = Self::new(d1, d2, vec![BigInt::zero(); s]);
        for &i in idx {
            d.mults[i] += 1;
        }
        d
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &self.d1 + &other.d1,
            &self.d2 + &other.d2,
            self.mults.iter().zip(&other.mults).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(&self.d1 * k, &self.d2 * k, self.mults.iter().map(|m| m * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.d1.is_zero() && self.d2.is_zero() && self.mults.iter().all(Zero::is_zero)
    }

    pub fn check(&self, space: &BlowupSpace) -> Result<()> {
        if self.mults.len() != space.s {
            return Err(Error::DimensionMismatch { expected: space.s, got: self.mults.len() });
        }
        Ok(())
    }

    /// Representative of the permutation orbit: mults sorted non-increasing.
    pub fn canonical_rep(&self) -> Self {
        let mut c = self.clone();
        c.mults.sort_by(|a, b| b.cmp(a));
        c
    }

    /// Row in the printed table convention: `d1 d2` followed by the
    /// coefficients of `E_i`, which are `-m_i`.
    pub fn table_row(&self) -> Vec<BigInt> {
        let mut row = vec![self.d1.clone(), self.d2.clone()];
        row.extend(self.mults.iter().map(|m| -m));
        row
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        let mut push = |coef: &BigInt, name: String| {
            if coef.is_zero() {
                return;
            }
            let mag = coef.abs();
            let body = if mag == BigInt::from(1) { name } else { format!("{mag}{name}") };
            if terms.is_empty() {
                terms.push(if coef.is_negative() { format!("-{body}") } else { body });
            } else {
                terms.push(format!("{} {body}", if coef.is_negative() { "-" } else { "+" }));
            }
        };
        push(&self.d1, "H1".into());
        push(&self.d2, "H2".into());
        for (i, m) in self.mults.iter().enumerate() {
            push(&-m, format!("E{}", i + 1));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    pub a1: BigInt,
    pub a2: BigInt,
    pub excs: Vec<BigInt>,
}

impl CurveClass {
    pub fn new(a1: impl Into<BigInt>, a2: impl Into<BigInt>, excs: Vec<BigInt>) -> Self {
        Self { a1: a1.into(), a2: a2.into(), excs }
    }

    pub fn from_i64(row: &[i64]) -> Self {
        Self::new(row[0], row[1], row[2..].iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(s: usize) -> Self {
        Self::new(0, 0, vec![BigInt::zero(); s])
    }

    /// The exceptional line `e_i` (stored coefficient `-1`).
    pub fn exceptional(s: usize, i: usize) -> Self {
        let mut c = Self::zero(s);
        c.excs[i] = BigInt::from(-1);
        c
    }

    /// `l_j - e_i` for `j` in `{1, 2}`.
    pub fn line_minus(s: usize, j: usize, i: usize) -> Self {
        let mut c = Self::line(s, j);
        c.excs[i] = BigInt::from(1);
        c
    }

    pub fn line(s: usize, j: usize) -> Self {
        let (a1, a2) = if j == 1 { (1, 0) } else { (0, 1) };
        Self::new(a1, a2, vec![BigInt::zero(); s])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &self.a1 + &other.a1,
            &self.a2 + &other.a2,
            self.excs.iter().zip(&other.excs).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            &self.a1 - &other.a1,
            &self.a2 - &other.a2,
            self.excs.iter().zip(&other.excs).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(&self.a1 * k, &self.a2 * k, self.excs.iter().map(|b| b * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.excs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        let mut push = |coef: &BigInt, name: String| {
            if coef.is_zero() {
                return;
            }
            let mag = coef.abs();
            let body = if mag == BigInt::from(1) { name } else { format!("{mag}{name}") };
            if terms.is_empty() {
                terms.push(if coef.is_negative() { format!("-{body}") } else { body });
            } else {
                terms.push(format!("{} {body}", if coef.is_negative() { "-" } else { "+" }));
            }
        };
        push(&self.a1, "l1".into());
        push(&self.a2, "l2".into());
        for (i, b) in self.excs.iter().enumerate() {
            push(&-b, format!("e{}", i + 1));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" "))
        }
    }
}

pub fn pair(space: &BlowupSpace, d: &DivisorClass, c: &CurveClass) -> Result<BigInt> {
    d.check(space)?;
    if c.excs.len() != space.s {
        return Err(Error::DimensionMismatch { expected: space.s, got: c.excs.len() });
    }
    let mut v = &d.d1 * &c.a1 + &d.d2 * &c.a2;
    for (m, b) in d.mults.iter().zip(&c.excs) {
        v -= m * b;
    }
    Ok(v)
}

/// `-K = (n+1)H1 + (n+2)H2 - 2n sum E_i` on `X^{n,n+1}_s`.
pub fn anticanonical(space: &BlowupSpace) -> Result<DivisorClass> {
    if space.m != space.n + 1 {
        return Err(Error::UnsupportedSpace(format!("{space}: anticanonical class needs m = n+1")));
    }
    let n = space.n as i64;
    Ok(DivisorClass::new(n + 1, n + 2, vec![BigInt::from(2 * n); space.s]))
}

/// Generators of the cone of curves: `e_i`, then `l1 - e_i`, then `l2 - e_i`.
/// Only available for `n, m >= 2` and `s <= n + m`.
pub fn mori_generators(space: &BlowupSpace) -> Result<Vec<CurveClass>> {
    if space.n < 2 || space.m < 2 || space.s > space.n + space.m {
        return Err(Error::Hypothesis(format!(
            "{space}: Mori cone generators need n, m >= 2 and s <= n + m"
        )));
    }
    let s = space.s;
    let mut out: Vec<CurveClass> = (0..s).map(|i| CurveClass::exceptional(s, i)).collect();
    for j in 1..=2 {
        out.extend((0..s).map(|i| CurveClass::line_minus(s, j, i)));
    }
    Ok(out)
}

/// All distinct classes obtained by permuting the multiplicities, sorted.
pub fn orbit(_space: &BlowupSpace, d: &DivisorClass) -> BTreeSet<DivisorClass> {
    let mut mults = d.mults.clone();
    mults.sort();
    let mut out = BTreeSet::new();
    loop {
        out.insert(DivisorClass::new(d.d1.clone(), d.d2.clone(), mults.clone()));
        if !next_permutation(&mut mults) {
            break;
        }
    }
    out
}

/// Number of distinct permutations of the multiplicities, without expanding.
pub fn orbit_size(d: &DivisorClass) -> usize {
    let mut counts = std::collections::BTreeMap::new();
    for m in &d.mults {
        *counts.entry(m).or_insert(0usize) += 1;
    }
    let mut total: u128 = 1;
    let mut placed: u128 = 0;
    for &c in counts.values() {
        for k in 1..=c as u128 {
            placed += 1;
            total = total * placed / k;
        }
    }
    total as usize
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x235() -> BlowupSpace {
        BlowupSpace::new(2, 3, 5)
    }

    #[test]
    fn basic_pairings() {
        let sp = x235();
        let h1 = DivisorClass::h1(5);
        assert_eq!(pair(&sp, &h1, &CurveClass::line(5, 1)).unwrap(), BigInt::from(1));
        let e1 = DivisorClass::exceptional(5, 0);
        assert_eq!(pair(&sp, &e1, &CurveClass::exceptional(5, 0)).unwrap(), BigInt::from(-1));
        let d = DivisorClass::from_i64(&[1, 2, 2, 2, 2, 2, 2]);
        let c = CurveClass::from_i64(&[2, 3, 1, 1, 1, 1, 1]);
        assert_eq!(pair(&sp, &d, &c).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn pair_dimension_mismatch() {
        let d = DivisorClass::zero(4);
        assert!(pair(&x235(), &d, &CurveClass::zero(5)).is_err());
    }

    #[test]
    fn anticanonical_values() {
        let k = anticanonical(&BlowupSpace::nn1(2, 5)).unwrap();
        assert_eq!(k, DivisorClass::from_i64(&[3, 4, 4, 4, 4, 4, 4]));
        let k = anticanonical(&BlowupSpace::nn1(1, 3)).unwrap();
        assert_eq!(k, DivisorClass::from_i64(&[2, 3, 2, 2, 2]));
        let k = anticanonical(&BlowupSpace::nn1(3, 6)).unwrap();
        assert_eq!(k.to_row()[..3], [4.into(), 5.into(), 6.into()]);
        assert!(anticanonical(&BlowupSpace::new(2, 2, 4)).is_err());
    }

    #[test]
    fn anticanonical_against_generators() {
        for n in 2..6 {
            let sp = BlowupSpace::nn1(n, n + 2);
            let k = anticanonical(&sp).unwrap();
            let n = n as i64;
            for i in 0..sp.s {
                let e = pair(&sp, &k, &CurveClass::exceptional(sp.s, i)).unwrap();
                assert_eq!(e, BigInt::from(2 * n));
                let l = pair(&sp, &k, &CurveClass::line_minus(sp.s, 1, i)).unwrap();
                assert_eq!(l, BigInt::from(1 - n));
            }
        }
    }

    #[test]
    fn mori_counts() {
        assert_eq!(mori_generators(&x235()).unwrap().len(), 15);
        assert_eq!(mori_generators(&BlowupSpace::new(2, 2, 4)).unwrap().len(), 12);
        assert!(mori_generators(&BlowupSpace::new(1, 2, 4)).is_err());
        assert!(mori_generators(&BlowupSpace::new(2, 3, 6)).is_err());
    }

    #[test]
    fn orbit_counts() {
        let sp = x235();
        let d = DivisorClass::linear(5, 1, 0, &[0, 1]);
        assert_eq!(orbit(&sp, &d).len(), 10);
        assert_eq!(orbit_size(&d), 10);
        let q = DivisorClass::linear(5, 2, 0, &[0, 1, 2, 3, 4]);
        assert_eq!(orbit(&sp, &q).len(), 1);
        let d = DivisorClass::from_i64(&[1, 1, 2, 1, 1, 1, 1]);
        assert_eq!(orbit(&sp, &d).len(), 5);
    }

    #[test]
    fn canonical_rep_sorts_descending() {
        let d = DivisorClass::from_i64(&[1, 1, 1, 2, 1, 3, 1]);
        assert_eq!(d.canonical_rep(), DivisorClass::from_i64(&[1, 1, 3, 2, 1, 1, 1]));
    }

    #[test]
    fn display_uses_exceptional_coefficients() {
        let d = DivisorClass::from_i64(&[1, 2, 2, 1, 0]);
        assert_eq!(d.to_string(), "H1 + 2H2 - 2E1 - E2");
        assert_eq!(DivisorClass::exceptional(2, 1).to_string(), "E2");
        assert_eq!(CurveClass::line_minus(3, 2, 0).to_string(), "l2 - e1");
    }
}
