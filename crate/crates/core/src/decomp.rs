//! Constructive decompositions of curve and divisor classes.
//!
//! Divisors on `X^{n,n+1}_s` with `s <= n+2` are split into exceptional
//! classes, `H1 - sum E` and `H2 - sum E` by filling a table with
//! `d1 + d2` rows and `n + 1` columns column by column.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ineq::{kappa_bilinear_span, kappa_pullback_hyperplane};
use crate::lattice::{BlowupSpace, CurveClass, DivisorClass};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Part<T> {
    pub class: T,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition<T> {
    pub target: T,
    pub parts: Vec<Part<T>>,
}

fn group<T: PartialEq>(items: Vec<T>) -> Vec<Part<T>> {
    let mut out: Vec<Part<T>> = Vec::new();
    for it in items {
        match out.iter_mut().find(|p| p.class == it) {
            Some(p) => p.multiplicity += 1,
            None => out.push(Part { class: it, multiplicity: 1 }),
        }
    }
    out
}

impl Decomposition<CurveClass> {
    pub fn sum(&self) -> CurveClass {
        self.parts.iter().fold(CurveClass::zero(self.target.excs.len()), |acc, p| {
            acc.add(&p.class.scale(&BigInt::from(p.multiplicity)))
        })
    }
}

impl Decomposition<DivisorClass> {
    pub fn sum(&self) -> DivisorClass {
        self.parts.iter().fold(DivisorClass::zero(self.target.s()), |acc, p| {
            acc.add(&p.class.scale(&BigInt::from(p.multiplicity)))
        })
    }

    pub fn contains(&self, d: &DivisorClass) -> bool {
        self.parts.iter().any(|p| &p.class == d)
    }
}

/// Writes `v` as a nonnegative combination of `e_i`, `l_j - e_i` and `l_j`,
/// always pairing the larger `a_j` (ties to `l1`) with the largest `b_i`
/// (ties to the lowest index). Negative `b_i` are split off as `e_i` first.
pub fn decompose_curve(v: &CurveClass) -> Result<Decomposition<CurveClass>> {
    let s = v.excs.len();
    if v.a1.is_negative() || v.a2.is_negative() {
        return Err(Error::Hypothesis(format!("{v}: line coefficients must be nonnegative")));
    }
    let positive: BigInt = v.excs.iter().filter(|b| b.is_positive()).sum();
    if &v.a1 + &v.a2 < positive {
        return Err(Error::Hypothesis(format!("{v}: a1 + a2 is smaller than the sum of the b_i")));
    }
    let mut items = Vec::new();
    let mut a = [v.a1.clone(), v.a2.clone()];
    let mut b = v.excs.clone();
    for (i, bi) in b.iter_mut().enumerate() {
        while bi.is_negative() {
            items.push(CurveClass::exceptional(s, i));
            *bi += 1;
        }
    }
    loop {
        let best = (0..s).filter(|&i| b[i].is_positive()).max_by(|&x, &y| b[x].cmp(&b[y]).then(y.cmp(&x)));
        let Some(i) = best else { break };
        let j = if a[0] >= a[1] { 0 } else { 1 };
        items.push(CurveClass::line_minus(s, j + 1, i));
        a[j] -= 1;
        b[i] -= 1;
    }
    for (j, aj) in a.iter().enumerate() {
        let count = aj.to_usize().ok_or_else(|| Error::InvalidParameter("coefficient too large".into()))?;
        items.extend(std::iter::repeat_n(CurveClass::line(s, j + 1), count));
    }
    Ok(Decomposition { target: v.clone(), parts: group(items) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowKind {
    H1,
    H2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub kind: RowKind,
    /// `None` marks a blank cell; a cell outside the row's shape is blank too.
    pub cells: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillTable {
    pub rows: Vec<TableRow>,
}

impl FillTable {
    /// True iff no row contains the same point twice.
    pub fn rows_distinct(&self) -> bool {
        self.rows.iter().all(|r| {
            let mut pts: Vec<usize> = r.cells.iter().flatten().copied().collect();
            let before = pts.len();
            pts.sort_unstable();
            pts.dedup();
            pts.len() == before
        })
    }

    fn classes(&self, s: usize) -> Vec<DivisorClass> {
        self.rows
            .iter()
            .map(|r| {
                let idx: Vec<usize> = r.cells.iter().flatten().copied().collect();
                match r.kind {
                    RowKind::H1 => DivisorClass::linear(s, 1, 0, &idx),
                    RowKind::H2 => DivisorClass::linear(s, 0, 1, &idx),
                }
            })
            .collect()
    }
}

impl fmt::Display for FillTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().flat_map(|r| r.cells.iter().flatten()).map(|i| format!("E{}", i + 1).len()).max().unwrap_or(2);
        let mut prev = None;
        for r in &self.rows {
            let line: Vec<String> = r.cells.iter().map(|c| match c {
                Some(i) => format!("{:<width$}", format!("E{}", i + 1)),
                None => format!("{:<width$}", "0"),
            }).collect();
            if prev.is_some_and(|k| k != r.kind) {
                writeln!(f, "{}", "-".repeat(line.len() * (width + 3) + 1))?;
            }
            let n = line.len() - 1;
            writeln!(f, "{} || {}   {:?}", line[..n].join(" | "), line[n], r.kind)?;
            prev = Some(r.kind);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDecomposition {
    pub decomposition: Decomposition<DivisorClass>,
    pub table: FillTable,
}

impl TableDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.decomposition.target.to_row().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "parts": self.decomposition.parts.iter().map(|p| serde_json::json!({
                "class": p.class.to_row().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "display": p.class.to_string(),
                "multiplicity": p.multiplicity,
            })).collect::<Vec<_>>(),
        })
    }
}

fn to_count(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize().ok_or_else(|| Error::Decomposition(format!("{what} = {x} is not a small nonnegative integer")))
}

/// Checks the defining inequalities of `Eff(X^{n,n+1}_{n+2})`; for `s < n+2`
/// the missing points are taken with multiplicity zero.
pub fn satisfies_eff_n2(space: &BlowupSpace, d: &DivisorClass) -> bool {
    let n = BigInt::from(space.n);
    if d.d1.is_negative() || d.d2.is_negative() {
        return false;
    }
    let total = &d.d1 + &d.d2;
    if d.mults.iter().any(|m| m > &total) {
        return false;
    }
    let bound = &n * &d.d1 + (&n + 1) * &d.d2;
    let mut sorted = d.mults.clone();
    sorted.sort_by(|a, b| b.cmp(a));
    sorted.resize(space.n + 2, BigInt::zero());
    let top: BigInt = sorted[..space.n + 1].iter().sum();
    let all: BigInt = sorted.iter().sum();
    top <= bound && all <= bound
}

fn check_nn1(space: &BlowupSpace, d: &DivisorClass) -> Result<()> {
    d.check(space)?;
    if space.m != space.n + 1 || space.n == 0 || space.s > space.n + 2 {
        return Err(Error::UnsupportedSpace(format!("{space}: table decompositions need m = n+1 >= 2, s <= n+2")));
    }
    Ok(())
}

/// Splits off `-m_i E_i` for every negative `m_i`.
fn split_negative(d: &DivisorClass) -> Result<(Vec<DivisorClass>, DivisorClass)> {
    let s = d.s();
    let mut g0 = Vec::new();
    let mut rest = d.clone();
    for i in 0..s {
        if d.mults[i].is_negative() {
            let k = to_count(&-&d.mults[i], "exceptional multiplicity")?;
            g0.extend(std::iter::repeat_n(DivisorClass::exceptional(s, i), k));
            rest.mults[i] = BigInt::zero();
        }
    }
    Ok((g0, rest))
}

/// Empty table with `shape(row)` giving the kind and the usable columns.
fn blank_table(rows: usize, cols: usize, shape: impl Fn(usize) -> (RowKind, Vec<bool>)) -> (FillTable, Vec<Vec<bool>>) {
    let mut t = FillTable { rows: Vec::with_capacity(rows) };
    let mut usable = Vec::with_capacity(rows);
    for r in 0..rows {
        let (kind, u) = shape(r);
        debug_assert_eq!(u.len(), cols);
        t.rows.push(TableRow { kind, cells: vec![None; cols] });
        usable.push(u);
    }
    (t, usable)
}

/// Usable cells of the given columns in column-major order.
fn cell_order(usable: &[Vec<bool>], cols: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c in cols {
        for (r, u) in usable.iter().enumerate() {
            if u[c] {
                out.push((r, c));
            }
        }
    }
    out
}

fn place(table: &mut FillTable, cells: &[(usize, usize)], seq: &[usize]) -> Result<()> {
    if seq.len() > cells.len() {
        return Err(Error::Decomposition(format!("{} entries do not fit in {} cells", seq.len(), cells.len())));
    }
    for (&(r, c), &p) in cells.iter().zip(seq) {
        table.rows[r].cells[c] = Some(p);
    }
    Ok(())
}

fn sequence(d: &DivisorClass, pts: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
    let mut seq = Vec::new();
    for i in pts {
        seq.extend(std::iter::repeat_n(i, to_count(&d.mults[i], "multiplicity")?));
    }
    Ok(seq)
}

fn finish(target: &DivisorClass, g0: Vec<DivisorClass>, table: FillTable) -> TableDecomposition {
    let mut items = g0;
    items.extend(table.classes(target.s()).into_iter().filter(|c| !c.is_zero()));
    TableDecomposition { decomposition: Decomposition { target: target.clone(), parts: group(items) }, table }
}

/// Continuous column-major fill of all points in index order.
fn fill_all(d: &DivisorClass, n: usize, h1_top: bool) -> Result<FillTable> {
    let (d1, d2) = (to_count(&d.d1, "d1")?, to_count(&d.d2, "d2")?);
    let (mut t, usable) = blank_table(d1 + d2, n + 1, |r| {
        let is_h1 = if h1_top { r < d1 } else { r >= d2 };
        let kind = if is_h1 { RowKind::H1 } else { RowKind::H2 };
        (kind, (0..=n).map(|c| c < n || !is_h1).collect())
    });
    let cells = cell_order(&usable, 0..=n);
    place(&mut t, &cells, &sequence(d, 0..d.s())?)?;
    Ok(t)
}

/// Decomposes a class satisfying the defining inequalities of
/// `Eff(X^{n,n+1}_{n+2})` into exceptional classes, `H1 - sum_{|I|<=n} E` and
/// `H2 - sum_{|I|<=n+1} E`.
///
/// The fill first tries the layout with the `H1` rows on top; if a row would
/// repeat a point it uses the layout with the `H1` rows at the bottom, which
/// never repeats.
pub fn table_decompose(space: &BlowupSpace, d: &DivisorClass) -> Result<TableDecomposition> {
    check_nn1(space, d)?;
    if !satisfies_eff_n2(space, d) {
        return Err(Error::Decomposition(format!("{d} violates the effectivity inequalities")));
    }
    let (g0, rest) = split_negative(d)?;
    let mut table = fill_all(&rest, space.n, true)?;
    if !table.rows_distinct() {
        table = fill_all(&rest, space.n, false)?;
    }
    debug_assert!(table.rows_distinct());
    Ok(finish(d, g0, table))
}

enum Avoided {
    /// `H1 - sum_{i in I} E_i` with `|I| = n`.
    Hyperplane(Vec<usize>),
    /// `H2 - sum_{i in I} E_i` with `|I| = n+1`.
    Span(Vec<usize>),
}

fn classify_avoided(space: &BlowupSpace, f: &DivisorClass) -> Result<Avoided> {
    let one = BigInt::from(1);
    let idx: Vec<usize> = (0..f.s()).filter(|&i| f.mults[i] == one).collect();
    let others_zero = f.mults.iter().all(|m| m.is_zero() || *m == one);
    match (f.d1.to_i64(), f.d2.to_i64()) {
        (Some(1), Some(0)) if others_zero && idx.len() == space.n => Ok(Avoided::Hyperplane(idx)),
        (Some(0), Some(1)) if others_zero && idx.len() == space.n + 1 => Ok(Avoided::Span(idx)),
        _ => Err(Error::InvalidParameter(format!(
            "{f} is neither H1 minus {} nor H2 minus {} exceptional classes",
            space.n,
            space.n + 1
        ))),
    }
}

/// A table decomposition containing no copy of the fixed class `avoid`,
/// which must be `H1 - sum_{|I|=n} E_i` or `H2 - sum_{|I|=n+1} E_i`.
pub fn table_decompose_avoiding(space: &BlowupSpace, d: &DivisorClass, avoid: &DivisorClass) -> Result<TableDecomposition> {
    check_nn1(space, d)?;
    avoid.check(space)?;
    if space.s != space.n + 1 && space.s != space.n + 2 {
        return Err(Error::UnsupportedSpace(format!("{space}: avoidance needs s in {{n+1, n+2}}")));
    }
    if !satisfies_eff_n2(space, d) {
        return Err(Error::Decomposition(format!("{d} violates the effectivity inequalities")));
    }
    let kind = classify_avoided(space, avoid)?;
    let (g0, rest) = split_negative(d)?;
    let k_f = match &kind {
        Avoided::Hyperplane(idx) => kappa_pullback_hyperplane(space, idx)?,
        Avoided::Span(idx) => kappa_bilinear_span(space, idx)?,
    };
    let k = k_f.functional.eval(d)?;
    if k.is_positive() {
        return Err(Error::Decomposition(format!("K_F(D) = {k} > 0: {avoid} lies in the base locus of {d}")));
    }
    let k_rest = k_f.functional.eval(&rest)?;
    if k_rest.is_positive() {
        return Err(Error::Decomposition(format!(
            "K_F = {k_rest} > 0 after removing negative multiplicities inside the avoided set"
        )));
    }
    let (d1, d2) = (to_count(&rest.d1, "d1")?, to_count(&rest.d2, "d2")?);
    let n = space.n;
    let rows = d1 + d2;
    let table = match kind {
        Avoided::Span(idx) => {
            let p = (0..space.s).find(|i| !idx.contains(i));
            let (mut t, usable) = blank_table(rows, n + 1, |r| {
                let h1 = r < d1;
                (if h1 { RowKind::H1 } else { RowKind::H2 }, (0..=n).map(|c| c < n || !h1).collect())
            });
            let mut seq = Vec::new();
            let mut last = Vec::new();
            if let Some(p) = p {
                let mp = to_count(&rest.mults[p], "multiplicity")?;
                let overflow = mp.saturating_sub(d2);
                seq.extend(std::iter::repeat_n(p, overflow));
                last.extend(std::iter::repeat_n(p, mp - overflow));
            }
            seq.extend(sequence(&rest, idx.iter().copied())?);
            place(&mut t, &cell_order(&usable, 0..n), &seq)?;
            place(&mut t, &cell_order(&usable, [n]), &last)?;
            t
        }
        Avoided::Hyperplane(idx) => {
            let qs: Vec<usize> = (0..space.s).filter(|i| !idx.contains(i)).collect();
            let (mut t, usable) = blank_table(rows, n + 1, |r| {
                let h1 = r >= d2;
                (if h1 { RowKind::H1 } else { RowKind::H2 }, (0..=n).map(|c| c != n - 1 || !h1).collect())
            });
            let counts: Vec<usize> = qs.iter().map(|&q| to_count(&rest.mults[q], "multiplicity")).collect::<Result<_>>()?;
            let overflow = counts.iter().sum::<usize>().saturating_sub(rows);
            let mut seq = Vec::new();
            let mut last = Vec::new();
            for (j, (&q, &c)) in qs.iter().zip(&counts).enumerate() {
                if j + 1 == qs.len() && overflow > 0 {
                    seq.extend(std::iter::repeat_n(q, overflow));
                    last.extend(std::iter::repeat_n(q, c - overflow));
                } else {
                    last.extend(std::iter::repeat_n(q, c));
                }
            }
            seq.extend(sequence(&rest, idx.iter().copied())?);
            place(&mut t, &cell_order(&usable, 0..n), &seq)?;
            place(&mut t, &cell_order(&usable, [n]), &last)?;
            t
        }
    };
    if !table.rows_distinct() {
        return Err(Error::Decomposition("fill table repeats a point within a row".into()));
    }
    let out = finish(d, g0, table);
    debug_assert!(!out.decomposition.contains(avoid));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64]) -> CurveClass {
        CurveClass::from_i64(v)
    }

    #[test]
    fn curve_examples() {
        let d = decompose_curve(&c(&[1, 0, 0, 0])).unwrap();
        assert_eq!(d.parts, vec![Part { class: CurveClass::line(2, 1), multiplicity: 1 }]);
        let d = decompose_curve(&c(&[1, 1, 1, 1])).unwrap();
        let got: Vec<_> = d.parts.iter().map(|p| p.class.clone()).collect();
        assert_eq!(got, vec![CurveClass::line_minus(2, 1, 0), CurveClass::line_minus(2, 2, 1)]);
        let d = decompose_curve(&c(&[2, 1, 1, 1, 1])).unwrap();
        let got: Vec<_> = d.parts.iter().map(|p| p.class.clone()).collect();
        assert_eq!(
            got,
            vec![CurveClass::line_minus(3, 1, 0), CurveClass::line_minus(3, 1, 1), CurveClass::line_minus(3, 2, 2)]
        );
        assert_eq!(d.sum(), d.target);
    }

    #[test]
    fn curve_hypotheses() {
        assert!(decompose_curve(&c(&[1, 0, 1, 1])).is_err());
        assert!(decompose_curve(&c(&[-1, 2, 0])).is_err());
        let d = decompose_curve(&c(&[1, 0, -2, 1])).unwrap();
        assert_eq!(d.sum(), d.target);
    }

    #[test]
    fn golden_example() {
        let sp = BlowupSpace::nn1(4, 6);
        let d = DivisorClass::from_i64(&[2, 3, 5, 5, 4, 3, 3, 2]);
        let out = table_decompose(&sp, &d).unwrap();
        let expected = vec![
            Part { class: DivisorClass::linear(6, 1, 0, &[0, 1, 2, 3]), multiplicity: 2 },
            Part { class: DivisorClass::linear(6, 0, 1, &[0, 1, 2, 4, 5]), multiplicity: 2 },
            Part { class: DivisorClass::linear(6, 0, 1, &[0, 1, 3, 4]), multiplicity: 1 },
        ];
        assert_eq!(out.decomposition.parts, expected);
        assert_eq!(out.decomposition.sum(), d);
        assert!(out.table.rows_distinct());
    }

    #[test]
    fn small_examples() {
        let sp = BlowupSpace::nn1(2, 4);
        let d = DivisorClass::exceptional(4, 0);
        let out = table_decompose(&sp, &d).unwrap();
        assert_eq!(out.decomposition.parts, vec![Part { class: d.clone(), multiplicity: 1 }]);
        let d = DivisorClass::linear(4, 1, 1, &[0, 1, 2]);
        let out = table_decompose(&sp, &d).unwrap();
        assert_eq!(out.decomposition.parts.len(), 2);
        assert_eq!(out.decomposition.sum(), d);
        assert!(table_decompose(&sp, &DivisorClass::linear(4, 1, 0, &[0, 1, 2])).is_err());
    }

    #[test]
    fn fallback_layout() {
        let sp = BlowupSpace::nn1(1, 3);
        let d = DivisorClass::from_i64(&[1, 2, 1, 3, 0]);
        assert!(!fill_all(&d, 1, true).unwrap().rows_distinct());
        let out = table_decompose(&sp, &d).unwrap();
        assert!(out.table.rows_distinct());
        assert_eq!(out.decomposition.sum(), d);
    }

    #[test]
    fn avoid_span_on_example() {
        let sp = BlowupSpace::nn1(4, 6);
        let d = DivisorClass::from_i64(&[2, 3, 5, 5, 4, 3, 3, 2]);
        let f2 = DivisorClass::linear(6, 0, 1, &[0, 1, 2, 3, 4]);
        let out = table_decompose_avoiding(&sp, &d, &f2).unwrap();
        assert!(!out.decomposition.contains(&f2));
        assert_eq!(out.decomposition.sum(), d);
        assert_eq!(out.table, table_decompose(&sp, &d).unwrap().table);
    }

    #[test]
    fn avoid_hyperplane() {
        let sp = BlowupSpace::nn1(2, 4);
        let d = DivisorClass::linear(4, 1, 1, &[0, 1, 2]);
        let f1 = DivisorClass::linear(4, 1, 0, &[0, 1]);
        let out = table_decompose_avoiding(&sp, &d, &f1).unwrap();
        assert!(!out.decomposition.contains(&f1));
        assert_eq!(out.decomposition.sum(), d);
        let bad = f1.scale(&BigInt::from(2));
        let err = table_decompose_avoiding(&sp, &bad, &f1).unwrap_err();
        assert!(matches!(err, Error::Decomposition(_)));
    }

    #[test]
    fn render_table() {
        let sp = BlowupSpace::nn1(4, 6);
        let d = DivisorClass::from_i64(&[2, 3, 5, 5, 4, 3, 3, 2]);
        let text = table_decompose(&sp, &d).unwrap().table.to_string();
        assert!(text.starts_with("E1 | E2 | E3 | E4 || 0"));
    }
}
