//! Log Fano certificates: strata of linear fibres, strict transforms of
//! pullback divisors, discrepancy ledgers and ampleness of `-K - Delta`.
//!
//! All arithmetic is exact. Ledger entries are grouped by symmetry class: a
//! stratum's discrepancy only depends on the sizes of its index sets, so each
//! entry carries a representative and the number of strata it stands for.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::cone::linalg::rank;
use crate::ineq::subsets;
use crate::lattice::{anticanonical, mori_generators, pair, BlowupSpace, CurveClass, DivisorClass};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StratumKind {
    A,
    B,
    C,
}

/// `A`: `L^1_I x P^m`, `B`: `P^n x L^2_J`, `C`: `L^1_I x L^2_J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Stratum {
    pub kind: StratumKind,
    pub i: Option<Vec<usize>>,
    pub j: Option<Vec<usize>>,
}

impl Stratum {
    pub fn a(i: Vec<usize>) -> Self {
        Self { kind: StratumKind::A, i: Some(i), j: None }
    }

    pub fn b(j: Vec<usize>) -> Self {
        Self { kind: StratumKind::B, i: None, j: Some(j) }
    }

    pub fn c(i: Vec<usize>, j: Vec<usize>) -> Self {
        Self { kind: StratumKind::C, i: Some(i), j: Some(j) }
    }
}

fn fmt_set(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.i, &self.j) {
            (Some(i), None) => write!(f, "L1[{}] x P", fmt_set(i)),
            (None, Some(j)) => write!(f, "P x L2[{}]", fmt_set(j)),
            (Some(i), Some(j)) => write!(f, "L1[{}] x L2[{}]", fmt_set(i), fmt_set(j)),
            (None, None) => write!(f, "?"),
        }
    }
}

/// Every stratum of `X^{n,m}_s`: A, then B, then C, each by subset size.
pub fn strata(space: &BlowupSpace) -> Vec<Stratum> {
    let first: Vec<Vec<usize>> = (1..=space.n.min(space.s)).flat_map(|k| subsets(space.s, k)).collect();
    let second: Vec<Vec<usize>> = (1..=space.m.min(space.s)).flat_map(|k| subsets(space.s, k)).collect();
    let mut out: Vec<Stratum> = first.iter().cloned().map(Stratum::a).collect();
    out.extend(second.iter().cloned().map(Stratum::b));
    for i in &first {
        for j in &second {
            out.push(Stratum::c(i.clone(), j.clone()));
        }
    }
    out
}

fn require_n_plus_2(space: &BlowupSpace) -> Result<()> {
    if space.m != space.n + 1 || space.s != space.n + 2 || space.n == 0 {
        return Err(Error::UnsupportedSpace(format!("{space}: expected X^{{n,n+1}}_{{n+2}} with n >= 1")));
    }
    Ok(())
}

/// Points `e_0, .., e_dim, (1, .., 1)` of `P^dim`, also used for the first
/// `dim + 1` points only.
fn model_points(dim: usize, count: usize) -> Vec<Vec<BigInt>> {
    (0..count)
        .map(|p| {
            (0..=dim)
                .map(|c| if p == dim + 1 || p == c { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// True when the spans of `a` and `b` meet exactly in the span of `a ∩ b`.
fn spans_meet_in_common(points: &[Vec<BigInt>], a: &[usize], b: &[usize]) -> bool {
    let span = |idx: &[usize]| rank(idx.iter().map(|&i| &points[i]));
    let mut both: Vec<usize> = a.iter().chain(b).copied().collect();
    both.sort_unstable();
    both.dedup();
    let common: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
    let meet = span(a) + span(b) - span(&both);
    meet == span(&common)
}

fn factor_closed(points: &[Vec<BigInt>], sets: &[Vec<usize>]) -> bool {
    for (x, a) in sets.iter().enumerate() {
        for b in &sets[x + 1..] {
            if !spans_meet_in_common(points, a, b) {
                return false;
            }
            let common: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
            if !common.is_empty() && !sets.contains(&common) {
                return false;
            }
        }
    }
    true
}

/// Closure under intersection of the strata blown up for `Delta` on
/// `X^{n,n+1}_{n+2}`: those A (resp. B) strata on which `D1` (resp. `D2`)
/// has positive `kappa`. C strata are products, closed when both factors are.
/// Spans are computed in an explicit general configuration.
pub fn intersection_closed_check(space: &BlowupSpace) -> Result<bool> {
    require_n_plus_2(space)?;
    let delta = delta_n_plus_2(space.n)?;
    let (d1, d2) = (&delta.components[0].0, &delta.components[1].0);
    closed_with(space, |i| kappa_first(d1, i).is_positive(), |j| kappa_second(d2, j).is_positive())
}

/// The same check over every A and B stratum regardless of `kappa`.
/// Fails from `n = 2` on, where two disjoint lines of `P^2` meet in a point.
pub fn intersection_closed_check_all(space: &BlowupSpace) -> Result<bool> {
    require_n_plus_2(space)?;
    closed_with(space, |_| true, |_| true)
}

fn closed_with(
    space: &BlowupSpace,
    keep1: impl Fn(&[usize]) -> bool,
    keep2: impl Fn(&[usize]) -> bool,
) -> Result<bool> {
    let s = space.s;
    let first: Vec<Vec<usize>> = (1..=space.n).flat_map(|k| subsets(s, k)).filter(|i| keep1(i)).collect();
    let second: Vec<Vec<usize>> = (1..=space.m).flat_map(|k| subsets(s, k)).filter(|j| keep2(j)).collect();
    Ok(factor_closed(&model_points(space.n, s), &first) && factor_closed(&model_points(space.m, s), &second))
}

/// Rational combination of divisor classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDivisor {
    pub label: String,
    pub components: Vec<(DivisorClass, BigRational)>,
}

impl BoundaryDivisor {
    pub fn coefficients_in_unit_interval(&self) -> bool {
        self.components.iter().all(|(_, c)| c.is_positive() && c < &BigRational::one())
    }

    pub fn dot(&self, space: &BlowupSpace, c: &CurveClass) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (d, k) in &self.components {
            acc += k * BigRational::from_integer(pair(space, d, c)?);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label,
            "components": self.components.iter().map(|(d, k)| json!({
                "class": d.to_row().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "display": d.to_string(),
                "coefficient": k.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

/// `(d1, m1, d2, m2)` of the two pullback components of `Delta`.
pub fn delta_n_plus_2_data(n: usize) -> (BigInt, BigInt, BigInt, BigInt) {
    let n = int(n as i64);
    let n1 = &n + 1;
    let n2 = &n + 2;
    let n3 = &n + 3;
    let d1 = int(3) * &n1 * &n1 * &n2 + &n * &n2 * &n2;
    let m1 = int(2) * &n * &n * &n2 + int(2) * &n * &n1 * &n1 - 1;
    let d2 = int(3) * &n1 * &n2 * &n2 + &n1 * &n1 * &n3;
    let m2 = int(2) * &n * &n2 * &n2 + int(2) * &n * &n1 * &n3 - 1;
    (d1, m1, d2, m2)
}

/// `1 / (4(n+1)(n+2))`.
pub fn delta_coefficient(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), int(4 * (n as i64 + 1) * (n as i64 + 2)))
}

/// `Delta = (D1 + D2) / (4(n+1)(n+2))` on `X^{n,n+1}_{n+2}`.
pub fn delta_n_plus_2(n: usize) -> Result<BoundaryDivisor> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let s = n + 2;
    let (d1, m1, d2, m2) = delta_n_plus_2_data(n);
    let c = delta_coefficient(n);
    Ok(BoundaryDivisor {
        label: format!("delta[n={n}]"),
        components: vec![
            (DivisorClass::new(d1, 0, vec![m1; s]), c.clone()),
            (DivisorClass::new(0, d2, vec![m2; s]), c),
        ],
    })
}

fn kappa_over(d: &BigInt, mults: &[BigInt], idx: &[usize]) -> BigInt {
    let sum: BigInt = idx.iter().map(|&i| &mults[i]).sum();
    let k = sum - d * int(idx.len() as i64 - 1);
    if k.is_positive() {
        k
    } else {
        BigInt::zero()
    }
}

fn kappa_first(d: &DivisorClass, idx: &[usize]) -> BigInt {
    kappa_over(&d.d1, &d.mults, idx)
}

fn kappa_second(d: &DivisorClass, idx: &[usize]) -> BigInt {
    kappa_over(&d.d2, &d.mults, idx)
}

/// Coefficients of the exceptional divisors over the given strata in the
/// strict transform of a pullback divisor. A divisor with `d2 = 0` is pulled
/// back from the first factor and only meets A and C strata; one with `d1 = 0`
/// comes from the second factor and only meets B and C strata.
pub fn strict_transform_class(
    space: &BlowupSpace,
    d: &DivisorClass,
    strata: &[Stratum],
) -> Result<BTreeMap<Stratum, BigInt>> {
    d.check(space)?;
    let first = if d.d2.is_zero() {
        true
    } else if d.d1.is_zero() {
        false
    } else {
        return Err(Error::InvalidParameter(format!("{d} is not pulled back from a factor")));
    };
    let mut out = BTreeMap::new();
    for st in strata {
        let k = match (first, &st.i, &st.j) {
            (true, Some(i), _) => kappa_first(d, i),
            (false, _, Some(j)) => kappa_second(d, j),
            _ => BigInt::zero(),
        };
        out.insert(st.clone(), k);
    }
    Ok(out)
}

/// One group of exceptional divisors sharing a discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub tag: String,
    pub representative: Option<Stratum>,
    pub count: BigInt,
    pub discrepancy: BigRational,
    /// Value of the closed form with the kappa gate ignored, when it differs.
    pub ungated: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyLedger {
    pub label: String,
    pub entries: Vec<LedgerEntry>,
    pub verdict: bool,
}

impl DiscrepancyLedger {
    fn new(label: String, entries: Vec<LedgerEntry>) -> Self {
        let minus_one = -BigRational::one();
        let verdict = entries.iter().all(|e| e.discrepancy > minus_one);
        Self { label, entries, verdict }
    }

    pub fn entry(&self, tag: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    pub fn min(&self) -> Option<&BigRational> {
        self.entries.iter().map(|e| &e.discrepancy).min()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label,
            "verdict": self.verdict,
            "entries": self.entries.iter().map(|e| {
                let mut v = json!({
                    "tag": e.tag,
                    "count": e.count.to_string(),
                    "discrepancy": e.discrepancy.to_string(),
                });
                if let Some(r) = &e.representative {
                    v["representative"] = json!(r.to_string());
                }
                if let Some(u) = &e.ungated {
                    v["ungated"] = json!(u.to_string());
                }
                v
            }).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for DiscrepancyLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label)?;
        for e in &self.entries {
            write!(f, "  {:<16} x{:<6} {}", e.tag, e.count.to_string(), e.discrepancy)?;
            if let Some(u) = &e.ungated {
                write!(f, "  (ungated {u})")?;
            }
            writeln!(f)?;
        }
        write!(f, "  verdict: {}", self.verdict)
    }
}

/// Discrepancies for a kappa value `k` over a stratum of codimension `codim`.
fn discrep(codim: usize, k: &BigInt, c: &BigRational) -> BigRational {
    BigRational::from_integer(int(codim as i64 - 1)) - c * BigRational::from_integer(k.clone())
}

fn stratum_kappa(d: &BigInt, m: &BigInt, size: usize) -> BigInt {
    m * int(size as i64) - d * int(size as i64 - 1)
}

/// Ledger for `(X^{n,n+1}_{n+2}, Delta)` over every A, B and C stratum.
pub fn discrepancies_n_plus_2(n: usize) -> Result<DiscrepancyLedger> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let s = n + 2;
    let (d1, m1, d2, m2) = delta_n_plus_2_data(n);
    let c = delta_coefficient(n);
    let zero = BigInt::zero();
    let group = |d: &BigInt, m: &BigInt, codim: usize, size: usize| {
        let raw = stratum_kappa(d, m, size);
        let gated = if raw.is_positive() { raw.clone() } else { zero.clone() };
        let value = discrep(codim, &gated, &c);
        let ungated = discrep(codim, &raw, &c);
        (value.clone(), (ungated != value).then_some(ungated))
    };
    let upto = |k: usize| (0..k).collect::<Vec<usize>>();
    let mut a = Vec::new();
    for k in 1..=n {
        let (value, ungated) = group(&d1, &m1, n + 1 - k, k);
        a.push((k, value, ungated));
    }
    let mut b = Vec::new();
    for k in 1..=n + 1 {
        let (value, ungated) = group(&d2, &m2, n + 2 - k, k);
        b.push((k, value, ungated));
    }
    let mut entries = Vec::new();
    for (k, value, ungated) in &a {
        entries.push(LedgerEntry {
            tag: format!("A[|I|={k}]"),
            representative: Some(Stratum::a(upto(*k))),
            count: binomial(int(s as i64), int(*k as i64)),
            discrepancy: value.clone(),
            ungated: ungated.clone(),
        });
    }
    for (k, value, ungated) in &b {
        entries.push(LedgerEntry {
            tag: format!("B[|J|={k}]"),
            representative: Some(Stratum::b(upto(*k))),
            count: binomial(int(s as i64), int(*k as i64)),
            discrepancy: value.clone(),
            ungated: ungated.clone(),
        });
    }
    let one = BigRational::one();
    for (ka, va, _) in &a {
        for (kb, vb, _) in &b {
            entries.push(LedgerEntry {
                tag: format!("C[|I|={ka},|J|={kb}]"),
                representative: Some(Stratum::c(upto(*ka), upto(*kb))),
                count: binomial(int(s as i64), int(*ka as i64)) * binomial(int(s as i64), int(*kb as i64)),
                discrepancy: va + vb + &one,
                ungated: None,
            });
        }
    }
    Ok(DiscrepancyLedger::new(format!("discrepancies[X^{{{n},{}}}_{s}]", n + 1), entries))
}

/// Discrepancy of a C stratum computed directly: codimension minus one minus
/// the multiplicity of `Delta`, each pullback component contributing its own
/// factor's kappa.
pub fn discrepancy_c_direct(n: usize, i: &[usize], j: &[usize]) -> Result<BigRational> {
    let delta = delta_n_plus_2(n)?;
    let (p, q) = (&delta.components[0], &delta.components[1]);
    let codim = (n + 1 - i.len()) + (n + 2 - j.len());
    let mult = &p.1 * BigRational::from_integer(kappa_first(&p.0, i))
        + &q.1 * BigRational::from_integer(kappa_second(&q.0, j));
    Ok(BigRational::from_integer(int(codim as i64 - 1)) - mult)
}

/// `d1 - m1`, `d2 - m2` and the bound `4(n+1)(n+2)` they must reach.
pub fn monotonicity_margins(n: usize) -> (BigInt, BigInt, BigInt) {
    let (d1, m1, d2, m2) = delta_n_plus_2_data(n);
    (d1 - m1, d2 - m2, int(4 * (n as i64 + 1) * (n as i64 + 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplenessReport {
    pub values: Vec<(CurveClass, BigRational)>,
    pub positive: bool,
    /// False when the curve list was not certified to span the Mori cone.
    pub certified: bool,
}

impl AmplenessReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "positive": self.positive,
            "certified": self.certified,
            "values": self.values.iter().map(|(c, v)| json!({
                "curve": c.to_string(),
                "value": v.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn ampleness_with(space: &BlowupSpace, boundary: &BoundaryDivisor, curves: Vec<CurveClass>, certified: bool) -> Result<AmplenessReport> {
    let k = anticanonical(space)?;
    let mut values = Vec::with_capacity(curves.len());
    for c in curves {
        let v = BigRational::from_integer(pair(space, &k, &c)?) - boundary.dot(space, &c)?;
        values.push((c, v));
    }
    let positive = values.iter().all(|(_, v)| v.is_positive());
    Ok(AmplenessReport { values, positive, certified })
}

/// `(-K - Delta).gamma` for every Mori generator `gamma`.
pub fn ampleness_check(space: &BlowupSpace, boundary: &BoundaryDivisor) -> Result<AmplenessReport> {
    let gens = mori_generators(space)?;
    ampleness_with(space, boundary, gens, true)
}

/// Same evaluation against `e_i, l1 - e_i, l2 - e_i` without the hypothesis
/// gate on the space; the report is marked uncertified when the gate fails.
pub fn ampleness_values(space: &BlowupSpace, boundary: &BoundaryDivisor) -> Result<AmplenessReport> {
    let certified = mori_generators(space).is_ok();
    let s = space.s;
    let mut curves: Vec<CurveClass> = (0..s).map(|i| CurveClass::exceptional(s, i)).collect();
    for j in 1..=2 {
        curves.extend((0..s).map(|i| CurveClass::line_minus(s, j, i)));
    }
    ampleness_with(space, boundary, curves, certified)
}

/// Ledger plus ampleness for the `n+2` family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogFanoReport {
    pub space: BlowupSpace,
    pub boundary: BoundaryDivisor,
    pub ledger: DiscrepancyLedger,
    pub ampleness: AmplenessReport,
}

impl LogFanoReport {
    pub fn verdict(&self) -> bool {
        self.ledger.verdict && self.ampleness.positive && self.ampleness.certified
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "space": self.space.to_string(),
            "boundary": self.boundary.to_json(),
            "ledger": self.ledger.to_json(),
            "ampleness": self.ampleness.to_json(),
            "verdict": self.verdict(),
        })
    }
}

impl fmt::Display for LogFanoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.space)?;
        for (d, k) in &self.boundary.components {
            writeln!(f, "  {k} * ({d})")?;
        }
        writeln!(f, "{}", self.ledger)?;
        writeln!(f, "ampleness{}", if self.ampleness.certified { "" } else { " (uncertified curve list)" })?;
        // One line per curve family: the smallest value over the points.
        for block in self.ampleness.values.chunks(self.space.s.max(1)) {
            if let Some((c, v)) = block.iter().min_by(|a, b| a.1.cmp(&b.1)) {
                writeln!(f, "  {c}: {v}")?;
            }
        }
        write!(f, "verdict: {}", self.verdict())
    }
}

pub fn n_plus_2_report(n: usize) -> Result<LogFanoReport> {
    let space = BlowupSpace::nn1(n, n + 2);
    let boundary = delta_n_plus_2(n)?;
    let ledger = discrepancies_n_plus_2(n)?;
    let ampleness = ampleness_values(&space, &boundary)?;
    Ok(LogFanoReport { space, boundary, ledger, ampleness })
}

/// Certificate on `X^{2,3}_5` for
/// `Delta = e1 (2H1 - sum E) + e2 (H1 + 2H2 - 2 sum E) + e3 (10H2 - 6 sum E)`.
pub fn x235_certificate(e1: &BigRational, e2: &BigRational, e3: &BigRational) -> Result<LogFanoReport> {
    let unit = |e: &BigRational| e.is_positive() && e < &BigRational::one();
    if !(unit(e1) && unit(e2) && unit(e3)) {
        return Err(Error::InvalidParameter(format!("coefficients must lie in (0,1): {e1}, {e2}, {e3}")));
    }
    let space = BlowupSpace::nn1(2, 5);
    let boundary = BoundaryDivisor {
        label: "delta[x235]".into(),
        components: vec![
            (DivisorClass::from_i64(&[2, 0, 1, 1, 1, 1, 1]), e1.clone()),
            (DivisorClass::from_i64(&[1, 2, 2, 2, 2, 2, 2]), e2.clone()),
            (DivisorClass::from_i64(&[0, 10, 6, 6, 6, 6, 6]), e3.clone()),
        ],
    };
    let q = |x: i64| BigRational::from_integer(int(x));
    let entries = vec![
        LedgerEntry {
            tag: "Pi2[i]".into(),
            representative: None,
            count: int(5),
            discrepancy: q(2) - e2 - q(6) * e3,
            ungated: None,
        },
        LedgerEntry {
            tag: "BL[i,j]".into(),
            representative: None,
            count: int(10),
            discrepancy: q(2) - e2 - q(3) * e3,
            ungated: None,
        },
        LedgerEntry {
            tag: "Pi2[i,j]".into(),
            representative: None,
            count: int(10),
            discrepancy: q(1) - e2 - e3,
            ungated: None,
        },
        LedgerEntry { tag: "C".into(), representative: None, count: int(1), discrepancy: q(3) - e1 - q(2) * e2, ungated: None },
    ];
    let ledger = DiscrepancyLedger::new("discrepancies[X^{2,3}_5]".into(), entries);
    let ampleness = ampleness_check(&space, &boundary)?;
    Ok(LogFanoReport { space, boundary, ledger, ampleness })
}

/// The three distinct ampleness values of a report whose boundary is
/// symmetric in the points: against `e_1`, `l1 - e_1`, `l2 - e_1`.
pub fn ampleness_margins(report: &AmplenessReport, s: usize) -> Vec<BigRational> {
    [0, s, 2 * s].iter().filter_map(|&k| report.values.get(k).map(|(_, v)| v.clone())).collect()
}
