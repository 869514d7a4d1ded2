//! The two-stage cone method and comparison against stored tables.
//!
//! Stage 1 cuts a candidate movable cone out of an inequality bundle. Stage 2
//! adjoins known fixed classes and keeps the extremal rays of the spanned
//! cone. Results are compared up to permutation of the points.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::json;

use crate::cone::linalg::{canonical_rows, Row};
use crate::cone::{self, parse_cone_text, RationalCone};
use crate::ineq::{
    kappa_bilinear_join, kappa_bilinear_span, kappa_bisecant, kappa_exceptional, kappa_pullback_cone,
    kappa_pullback_hyperplane, kappa_swept_by_curve, subsets, effectivity_x346, Inequality, LinearFunctional,
};
use crate::lattice::{orbit_size, BlowupSpace, CurveClass, DivisorClass};
use crate::{Error, Result};

/// Environment variable naming a directory that overrides the built-in fixtures.
pub const FIXTURES_ENV: &str = "BLOWUP_FIXTURES";

const BUILTIN_FIXTURES: &[(&str, &str)] = &[
    ("x235-eff", include_str!("../fixtures/x235-eff.cone")),
    ("x235-mov", include_str!("../fixtures/x235-mov.cone")),
    ("x346-eff", include_str!("../fixtures/x346-eff.cone")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeMethodConfig {
    pub label: String,
    pub space: BlowupSpace,
    pub inequalities: Vec<Inequality>,
    pub fixed: Vec<DivisorClass>,
}

/// Classes up to permutation of the points, one canonical representative each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    pub space: BlowupSpace,
    pub orbits: Vec<DivisorClass>,
}

impl OrbitTable {
    pub fn from_classes<'a>(space: BlowupSpace, classes: impl IntoIterator<Item = &'a DivisorClass>) -> Self {
        let set: BTreeSet<DivisorClass> = classes.into_iter().map(DivisorClass::canonical_rep).collect();
        Self { space, orbits: set.into_iter().collect() }
    }

    pub fn from_rows(space: BlowupSpace, rows: &[Row]) -> Result<Self> {
        let classes = rows.iter().map(|r| DivisorClass::from_row(r)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_classes(space, &classes))
    }

    /// Number of classes after expanding every orbit.
    pub fn total(&self) -> usize {
        self.orbits.iter().map(orbit_size).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "space": self.space.to_string(),
            "orbits": self.orbits.len(),
            "total": self.total(),
            "rows": self.orbits.iter().map(|d| json!({
                "class": d.to_row().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "display": d.to_string(),
                "orbit_size": orbit_size(d),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Rows in the layout `H1 H2 E1 .. Es`, with exceptional coefficients as they
/// appear in the class (so `H1 - E1 - E2` reads `1 0 -1 -1 0 ..`).
impl fmt::Display for OrbitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header = vec!["H1".to_string(), "H2".to_string()];
        header.extend((1..=self.space.s).map(|i| format!("E{i}")));
        let rows: Vec<Vec<String>> =
            self.orbits.iter().map(|d| d.table_row().iter().map(|x| x.to_string()).collect()).collect();
        let width = rows.iter().flatten().chain(&header).map(String::len).max().unwrap_or(2);
        let line = |cells: &[String]| cells.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", line(&header))?;
        for r in &rows {
            writeln!(f, "{}", line(r))?;
        }
        write!(f, "{} orbits, {} classes", self.orbits.len(), self.total())
    }
}

#[derive(Debug, Clone)]
pub struct ConeMethodOutput {
    pub movable: RationalCone,
    pub effective: RationalCone,
    pub movable_orbits: OrbitTable,
    pub effective_orbits: OrbitTable,
}

fn rows_of(config: &ConeMethodConfig) -> Result<Vec<Row>> {
    let dim = config.space.rank();
    let mut rows = Vec::with_capacity(config.inequalities.len());
    for q in &config.inequalities {
        if q.coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: q.coeffs.len() });
        }
        rows.push(q.cone_row());
    }
    Ok(rows)
}

/// Stage 1 only: the cone cut out by the bundle.
pub fn stage_one(config: &ConeMethodConfig) -> Result<RationalCone> {
    if config.inequalities.is_empty() {
        return Err(Error::InvalidParameter(format!("{}: empty inequality bundle", config.label)));
    }
    cone::rays_from_inequalities(&rows_of(config)?, config.space.rank())
}

/// The cone spanned by `gens`, described by its extremal rays and facets.
pub fn spanned_cone(gens: &[Row], dim: usize) -> Result<RationalCone> {
    let mut c = cone::inequalities_from_rays(gens, dim)?;
    let rays = c.extremal_rays()?;
    c.generators = Some(rays);
    Ok(c)
}

pub fn cone_method(config: &ConeMethodConfig) -> Result<ConeMethodOutput> {
    if config.fixed.is_empty() {
        return Err(Error::InvalidParameter(format!("{}: no fixed classes", config.label)));
    }
    let dim = config.space.rank();
    for d in &config.fixed {
        d.check(&config.space)?;
    }
    let movable = stage_one(config)?;
    let mut gens = movable.generators.clone().unwrap_or_default();
    gens.extend(config.fixed.iter().map(DivisorClass::to_row));
    let effective = spanned_cone(&gens, dim)?;
    let movable_orbits = OrbitTable::from_rows(config.space, movable.generators.as_deref().unwrap_or_default())?;
    let effective_orbits = OrbitTable::from_rows(config.space, effective.generators.as_deref().unwrap_or_default())?;
    Ok(ConeMethodOutput { movable, effective, movable_orbits, effective_orbits })
}

/// Lifts inequalities on `X^{n,m}_{s-1}` to `X^{n,m}_s` by giving each omitted
/// point coefficient 0, for every choice of omitted point. Duplicates are dropped,
/// keeping the first label.
pub fn pullback_inequalities(space: &BlowupSpace, lower: &[Inequality]) -> Result<Vec<Inequality>> {
    if lower.is_empty() {
        return Err(Error::MissingReference(format!("no inequalities for {}", space.with_points(space.s.saturating_sub(1)))));
    }
    if space.s == 0 {
        return Err(Error::InvalidParameter("cannot pull back to a space without points".into()));
    }
    let dim = space.rank() - 1;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for q in lower {
        if q.coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: q.coeffs.len() });
        }
        for omit in 0..space.s {
            let mut coeffs = q.coeffs.clone();
            coeffs.insert(2 + omit, BigInt::from(0));
            if seen.insert((coeffs.clone(), q.sense)) {
                out.push(Inequality { label: format!("pullback[{},omit={}]", q.label, omit + 1), coeffs, sense: q.sense });
            }
        }
    }
    Ok(out)
}

fn functional(space: &BlowupSpace, label: String, d1: i64, d2: i64, point: impl Fn(usize) -> i64) -> Inequality {
    let mut coeffs = vec![BigInt::from(d1), BigInt::from(d2)];
    coeffs.extend((0..space.s).map(|i| BigInt::from(point(i))));
    Inequality::effectivity(LinearFunctional { label, coeffs })
}

fn fmt_set(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Defining inequalities of `Eff(X^{n,n+1}_{n+2})`: `d_j >= 0`, `d1 + d2 >= m_i`
/// and `n d1 + (n+1) d2 >= sum_I m` for `|I|` in `{n+1, n+2}`.
pub fn eff_n_plus_2_inequalities(n: usize) -> Vec<Inequality> {
    let sp = BlowupSpace::nn1(n, n + 2);
    let s = n + 2;
    let ni = n as i64;
    let mut out = vec![
        functional(&sp, format!("degree[n={n},H1]"), 1, 0, |_| 0),
        functional(&sp, format!("degree[n={n},H2]"), 0, 1, |_| 0),
    ];
    for i in 0..s {
        out.push(functional(&sp, format!("point[n={n},i={}]", i + 1), 1, 1, |j| if j == i { -1 } else { 0 }));
    }
    for size in [n + 1, n + 2] {
        for set in subsets(s, size) {
            out.push(functional(&sp, format!("span[n={n},I={}]", fmt_set(&set)), ni, ni + 1, |j| {
                if set.contains(&j) { -1 } else { 0 }
            }));
        }
    }
    out
}

/// Extremal rays of `Eff(X^{n,n+1}_{n+2})`: `E_i`, `H1 - sum_{|I|=n} E` and
/// `H2 - sum_{|I|=n+1} E`.
pub fn eff_n_plus_2_generators(n: usize) -> Vec<DivisorClass> {
    let s = n + 2;
    let mut out: Vec<DivisorClass> = (0..s).map(|i| DivisorClass::exceptional(s, i)).collect();
    out.extend(subsets(s, n).iter().map(|set| DivisorClass::linear(s, 1, 0, set)));
    out.extend(subsets(s, n + 1).iter().map(|set| DivisorClass::linear(s, 0, 1, set)));
    out
}

/// The effective inequalities plus `m_i >= 0`, `(n-1)d1 + n d2 >= sum_I m` for
/// `|I| = n` and `n d1 + n d2 >= sum_I m` for `|I| = n+1`.
pub fn mov_n_plus_2_inequalities(n: usize) -> Vec<Inequality> {
    let sp = BlowupSpace::nn1(n, n + 2);
    let s = n + 2;
    let ni = n as i64;
    let mut out = eff_n_plus_2_inequalities(n);
    for i in 0..s {
        out.push(functional(&sp, format!("mult[n={n},i={}]", i + 1), 0, 0, |j| i64::from(j == i)));
    }
    for set in subsets(s, n) {
        out.push(functional(&sp, format!("mov-h1[n={n},I={}]", fmt_set(&set)), ni - 1, ni, |j| {
            if set.contains(&j) { -1 } else { 0 }
        }));
    }
    for set in subsets(s, n + 1) {
        out.push(functional(&sp, format!("mov-h2[n={n},I={}]", fmt_set(&set)), ni, ni, |j| {
            if set.contains(&j) { -1 } else { 0 }
        }));
    }
    out
}

fn class(d1: i64, d2: i64, mults: Vec<i64>) -> DivisorClass {
    DivisorClass::new(d1, d2, mults.into_iter().map(BigInt::from).collect())
}

/// The conjectured generators of `Mov(X^{n,n+1}_{n+2})`, one class per orbit.
/// Point `j` is placed right after the block `I`, the rest follow.
pub fn mov_n_plus_2_candidates(n: usize) -> Vec<DivisorClass> {
    let s = n + 2;
    let mut out = Vec::new();
    let block = |inside: i64, size: usize, j: Option<i64>, rest: i64| -> Vec<i64> {
        let mut v = vec![inside; size];
        if let Some(e) = j {
            v.push(e);
        }
        v.resize(s, rest);
        v
    };
    for size in 0..n {
        out.push(class(1, 0, block(1, size, None, 0)));
    }
    for size in 0..=n {
        out.push(class(0, 1, block(1, size, None, 0)));
    }
    for k in 2..=n {
        let k64 = k as i64;
        for eps in [0, 1] {
            out.push(class(k64, 0, block(k64 - 1, k + 1, Some(eps), k64)));
        }
    }
    for k in 2..=n + 1 {
        let k64 = k as i64;
        out.push(class(0, k64, block(k64 - 1, k + 1, None, k64)));
    }
    for k in 1..=n {
        let k64 = k as i64;
        for eps in [0, 1] {
            out.push(class(k64, 1, block(k64, k + 1, Some(eps), k64 + 1)));
        }
    }
    for k in 1..=n {
        let k64 = k as i64;
        out.push(class(1, k64, block(k64, k + 2, None, k64 + 1)));
    }
    out.into_iter().map(|d| d.canonical_rep()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn exceptional_bundle(space: &BlowupSpace) -> Result<Vec<Inequality>> {
    (0..space.s).map(|i| kappa_exceptional(space, i).map(|f| Inequality::kappa(&f))).collect()
}

/// Bundle and fixed classes for `X^{2,3}_5`.
pub fn x235_bundle() -> Result<ConeMethodConfig> {
    let space = BlowupSpace::nn1(2, 5);
    let s = space.s;
    let mut ineqs = pullback_inequalities(&space, &eff_n_plus_2_inequalities(2))?;
    ineqs.extend(exceptional_bundle(&space)?);
    for set in subsets(s, 2) {
        ineqs.push(Inequality::kappa(&kappa_pullback_hyperplane(&space, &set)?));
    }
    for set in subsets(s, 3) {
        ineqs.push(Inequality::kappa(&kappa_bilinear_span(&space, &set)?));
    }
    ineqs.push(Inequality::kappa(&kappa_pullback_cone(&space, 1, &[])?));
    ineqs.push(Inequality::kappa(&kappa_bisecant(&space, 2)?));
    let gamma = CurveClass::from_i64(&[3, 3, 1, 1, 1, 1, 1]);
    ineqs.push(Inequality::kappa(&kappa_swept_by_curve(&space, &gamma, "kappa-swept[n=2,s=5,curve=3l1+3l2-e]")?));
    for set in subsets(s, 2) {
        let f = kappa_bilinear_join(&space, 1, &set)?;
        let coeffs = f.functional.coeffs.iter().map(|c| -c).collect();
        ineqs.push(Inequality::effectivity(LinearFunctional {
            label: f.functional.label.replacen("kappa-", "eff-", 1),
            coeffs,
        }));
    }
    let mut fixed = vec![class(2, 0, vec![1; 5]), class(1, 2, vec![2; 5])];
    fixed.extend((0..s).map(|i| DivisorClass::exceptional(s, i)));
    fixed.extend(subsets(s, 2).iter().map(|set| DivisorClass::linear(s, 1, 0, set)));
    fixed.extend(subsets(s, 3).iter().map(|set| DivisorClass::linear(s, 0, 1, set)));
    Ok(ConeMethodConfig { label: "x235".into(), space, inequalities: ineqs, fixed })
}

/// Bundle and fixed classes for `X^{3,4}_6`.
pub fn x346_bundle() -> Result<ConeMethodConfig> {
    let space = BlowupSpace::nn1(3, 6);
    let s = space.s;
    let mut ineqs = pullback_inequalities(&space, &eff_n_plus_2_inequalities(3))?;
    ineqs.extend(exceptional_bundle(&space)?);
    for set in subsets(s, 4) {
        ineqs.push(Inequality::kappa(&kappa_bilinear_span(&space, &set)?));
    }
    for i in 0..s {
        ineqs.push(Inequality::kappa(&kappa_pullback_cone(&space, 1, &[i])?));
    }
    for i in 0..s {
        ineqs.push(Inequality::kappa(&kappa_bilinear_join(&space, 2, &[i])?));
    }
    ineqs.extend(effectivity_x346(&space)?.into_iter().map(Inequality::effectivity));
    let mut fixed = Vec::new();
    for i in 0..s {
        let mut q = vec![1; s];
        q[i] = 2;
        fixed.push(class(2, 0, q));
        let mut d = vec![2; s];
        d[i] = 3;
        fixed.push(class(1, 2, d));
    }
    fixed.extend((0..s).map(|i| DivisorClass::exceptional(s, i)));
    fixed.extend(subsets(s, 3).iter().map(|set| DivisorClass::linear(s, 1, 0, set)));
    fixed.extend(subsets(s, 4).iter().map(|set| DivisorClass::linear(s, 0, 1, set)));
    Ok(ConeMethodConfig { label: "x346".into(), space, inequalities: ineqs, fixed })
}

/// The bundle for a supported space: `X^{2,3}_5` or `X^{3,4}_6`.
pub fn bundle_for(space: &BlowupSpace) -> Result<ConeMethodConfig> {
    match (space.n, space.m, space.s) {
        (2, 3, 5) => x235_bundle(),
        (3, 4, 6) => x346_bundle(),
        _ => Err(Error::UnsupportedSpace(format!("{space}: no inequality bundle"))),
    }
}

/// Effective cone in orbit form. `X^{n,n+1}_{n+2}` is cut out by its defining inequalities,
/// `X^{2,3}_5` and `X^{3,4}_6` by the two-stage cone method.
pub fn effective_cone(space: &BlowupSpace) -> Result<OrbitTable> {
    if space.m == space.n + 1 && space.s == space.n + 2 && space.n >= 1 {
        let c = stage_one(&family_config(space.n, eff_n_plus_2_inequalities(space.n)))?;
        return OrbitTable::from_rows(*space, c.generators.as_deref().unwrap_or_default());
    }
    Ok(cone_method(&bundle_for(space)?)?.effective_orbits)
}

/// Movable cone (or its stage-one candidate) in orbit form.
pub fn movable_cone(space: &BlowupSpace) -> Result<OrbitTable> {
    if space.m == space.n + 1 && space.s == space.n + 2 && space.n >= 1 {
        let c = stage_one(&family_config(space.n, mov_n_plus_2_inequalities(space.n)))?;
        return OrbitTable::from_rows(*space, c.generators.as_deref().unwrap_or_default());
    }
    let c = stage_one(&bundle_for(space)?)?;
    OrbitTable::from_rows(*space, c.generators.as_deref().unwrap_or_default())
}

fn family_config(n: usize, inequalities: Vec<Inequality>) -> ConeMethodConfig {
    ConeMethodConfig { label: format!("n+2[n={n}]"), space: BlowupSpace::nn1(n, n + 2), inequalities, fixed: Vec::new() }
}

/// Loads a stored table. `BLOWUP_FIXTURES` points at a directory holding
/// `<id>.cone` files that take precedence over the built-in copies.
pub fn load_fixture(id: &str) -> Result<(BlowupSpace, Vec<DivisorClass>)> {
    let text = match std::env::var_os(FIXTURES_ENV) {
        Some(dir) if PathBuf::from(&dir).join(format!("{id}.cone")).exists() => {
            let path = PathBuf::from(dir).join(format!("{id}.cone"));
            std::fs::read_to_string(&path).map_err(|e| Error::MissingReference(format!("{}: {e}", path.display())))?
        }
        _ => BUILTIN_FIXTURES
            .iter()
            .find(|(k, _)| *k == id)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Error::UnknownTable(id.to_string()))?,
    };
    let file = parse_cone_text(&text)?;
    let rows = file.generators.ok_or_else(|| Error::MissingReference(format!("{id}: no generators block")))?;
    let s = file.dim.checked_sub(2).ok_or_else(|| Error::MissingReference(format!("{id}: dimension too small")))?;
    let n = match s {
        5 => 2,
        6 => 3,
        _ => return Err(Error::MissingReference(format!("{id}: unexpected dimension {}", file.dim))),
    };
    let classes = rows.iter().map(|r| DivisorClass::from_row(r)).collect::<Result<Vec<_>>>()?;
    Ok((BlowupSpace::nn1(n, s), classes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub id: String,
    pub computed: OrbitTable,
    pub expected: OrbitTable,
    pub missing: Vec<DivisorClass>,
    pub extra: Vec<DivisorClass>,
    pub matched: bool,
}

impl TableReport {
    fn new(id: String, computed: OrbitTable, expected: OrbitTable) -> Self {
        let c: BTreeSet<_> = computed.orbits.iter().cloned().collect();
        let e: BTreeSet<_> = expected.orbits.iter().cloned().collect();
        let missing: Vec<_> = e.difference(&c).cloned().collect();
        let extra: Vec<_> = c.difference(&e).cloned().collect();
        let matched = missing.is_empty() && extra.is_empty();
        Self { id, computed, expected, missing, extra, matched }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = |v: &[DivisorClass]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        json!({
            "id": self.id,
            "matched": self.matched,
            "computed": self.computed.to_json(),
            "expected_orbits": self.expected.orbits.len(),
            "expected_total": self.expected.total(),
            "missing": rows(&self.missing),
            "extra": rows(&self.extra),
        })
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.id, if self.matched { "matched" } else { "MISMATCH" })?;
        writeln!(f, "{}", self.computed)?;
        for d in &self.missing {
            writeln!(f, "missing: {d}")?;
        }
        for d in &self.extra {
            writeln!(f, "extra: {d}")?;
        }
        write!(f, "expected {} orbits, {} classes", self.expected.orbits.len(), self.expected.total())
    }
}

/// Identifiers accepted by [`verify_table`].
pub const TABLE_IDS: &[&str] = &["x235-eff", "x235-mov", "x346-eff", "eff-n+2:N", "mov-n+2:N"];

fn family_n(id: &str, prefix: &str) -> Result<Option<usize>> {
    let Some(rest) = id.strip_prefix(prefix) else { return Ok(None) };
    let n = match rest.strip_prefix(':') {
        None if rest.is_empty() => 2,
        Some(v) => v.parse::<usize>().map_err(|_| Error::UnknownTable(id.to_string()))?,
        None => return Err(Error::UnknownTable(id.to_string())),
    };
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(Some(n))
}

/// Orbit-level comparison of a computed cone with its reference.
///
/// `eff-n+2:N` compares the rays cut out by the effective inequalities with
/// the listed extremal rays; `mov-n+2:N` compares the rays cut out by the
/// movable inequalities with the conjectured list.
pub fn verify_table(id: &str) -> Result<TableReport> {
    if let Some(n) = family_n(id, "eff-n+2")? {
        let space = BlowupSpace::nn1(n, n + 2);
        let expected = OrbitTable::from_classes(space, &eff_n_plus_2_generators(n));
        return Ok(TableReport::new(id.to_string(), effective_cone(&space)?, expected));
    }
    if let Some(n) = family_n(id, "mov-n+2")? {
        let space = BlowupSpace::nn1(n, n + 2);
        let expected = OrbitTable::from_classes(space, &mov_n_plus_2_candidates(n));
        return Ok(TableReport::new(id.to_string(), movable_cone(&space)?, expected));
    }
    let (space, classes) = load_fixture(id)?;
    let expected = OrbitTable::from_classes(space, &classes);
    let out = cone_method(&bundle_for(&space)?)?;
    let computed = match id {
        "x235-mov" => out.movable_orbits,
        _ => out.effective_orbits,
    };
    Ok(TableReport::new(id.to_string(), computed, expected))
}

/// Both directions between the generator and inequality lists: facets of the spanned
/// cone against the listed inequalities, rays of the cut-out cone against the
/// listed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub n: usize,
    pub facets_match: bool,
    pub rays_match: bool,
    pub facets: usize,
    pub rays: usize,
}

pub fn eff_n_plus_2_round_trip(n: usize) -> Result<RoundTrip> {
    let space = BlowupSpace::nn1(n, n + 2);
    let dim = space.rank();
    let gens: Vec<Row> = eff_n_plus_2_generators(n).iter().map(DivisorClass::to_row).collect();
    let ineqs: Vec<Row> = eff_n_plus_2_inequalities(n).iter().map(Inequality::cone_row).collect();
    let from_gens = cone::inequalities_from_rays(&gens, dim)?;
    let from_ineqs = cone::rays_from_inequalities(&ineqs, dim)?;
    let facets = from_gens.inequalities.clone().unwrap_or_default();
    let rays = from_ineqs.generators.clone().unwrap_or_default();
    Ok(RoundTrip {
        n,
        facets_match: canonical_rows(&facets) == canonical_rows(&ineqs),
        rays_match: canonical_rows(&rays) == canonical_rows(&gens),
        facets: facets.len(),
        rays: rays.len(),
    })
}

/// Extremality of each class in the computed effective cone of
/// `X^{n,n+1}_{n+3}`, `n` in `{2, 3}`.
pub fn bsj_extremality(space: &BlowupSpace, classes: &[DivisorClass]) -> Result<Vec<(DivisorClass, bool)>> {
    if !(space.m == space.n + 1 && space.s == space.n + 3 && (space.n == 2 || space.n == 3)) {
        return Err(Error::UnsupportedSpace(format!("{space}: the extremality check needs X^{{n,n+1}}_{{n+3}}, n in {{2,3}}")));
    }
    let eff = cone_method(&bundle_for(space)?)?.effective;
    classes
        .iter()
        .map(|d| {
            d.check(space)?;
            Ok((d.clone(), eff.is_extremal(&d.to_row())?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullback_lift() {
        let space = BlowupSpace::nn1(2, 5);
        let lifted = pullback_inequalities(&space, &eff_n_plus_2_inequalities(2)).unwrap();
        let line: Vec<_> = lifted.iter().filter(|q| q.coeffs[..2] == [1.into(), 1.into()]).collect();
        assert_eq!(line.len(), 5);
        let four: Vec<_> = lifted
            .iter()
            .filter(|q| q.coeffs[..2] == [2.into(), 3.into()] && q.coeffs[2..].iter().filter(|c| **c != 0.into()).count() == 4)
            .collect();
        assert_eq!(four.len(), 5);
        let d1 = lifted.iter().filter(|q| q.coeffs[0] == 1.into() && q.coeffs[1..].iter().all(|c| *c == 0.into())).count();
        assert_eq!(d1, 1);
        assert!(pullback_inequalities(&space, &[]).is_err());
    }

    #[test]
    fn candidates_n2() {
        let c = mov_n_plus_2_candidates(2);
        assert!(c.contains(&class(1, 0, vec![0; 4])));
        assert!(c.contains(&class(1, 1, vec![2, 1, 1, 1])));
        assert!(c.contains(&class(0, 3, vec![2, 2, 2, 2])));
    }

    #[test]
    fn round_trip_small() {
        for n in 1..=3 {
            let rt = eff_n_plus_2_round_trip(n).unwrap();
            assert!(rt.facets_match && rt.rays_match, "{rt:?}");
        }
    }

    #[test]
    fn unknown_ids() {
        assert!(matches!(verify_table("nope"), Err(Error::UnknownTable(_))));
        assert!(verify_table("mov-n+2:x").is_err());
        assert!(bsj_extremality(&BlowupSpace::nn1(4, 7), &[]).is_err());
    }
}
