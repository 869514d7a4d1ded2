//! Brute-force oracles shared by the integration tests. None of them call the
//! double description or Hilbert basis code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use blowup_core::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub type IRow = Vec<i64>;

pub fn to_i64(r: &[BigInt]) -> IRow {
    r.iter().map(|x| x.to_i64().expect("small entry")).collect()
}

pub fn to_big(r: &[i64]) -> Vec<BigInt> {
    r.iter().map(|&x| BigInt::from(x)).collect()
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn primitive(v: Vec<i128>) -> Option<IRow> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return None;
    }
    Some(v.iter().map(|x| (x / g) as i64).collect())
}

/// Integer normal to `d - 1` vectors in dimension `d` by signed maximal minors.
pub fn normal(vs: &[IRow], d: usize) -> Option<IRow> {
    let m: Vec<Vec<i128>> = vs.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let v: Vec<i128> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
            if j % 2 == 0 { det(&minor) } else { -det(&minor) }
        })
        .collect();
    primitive(v)
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every primitive `a` orthogonal to `d - 1` of the `rows` with `a . r >= 0`
/// for all rows. Applied to generators this gives the facets of a full cone;
/// applied to inequalities it gives the extreme rays of a pointed cone.
pub fn supporting(rows: &[IRow], d: usize) -> BTreeSet<IRow> {
    let mut out = BTreeSet::new();
    if d == 1 {
        for s in [1i64, -1] {
            if rows.iter().all(|r| r[0] * s >= 0) {
                out.insert(vec![s]);
            }
        }
        return out;
    }
    for idx in combos(rows.len(), d - 1) {
        let vs: Vec<IRow> = idx.iter().map(|&i| rows[i].clone()).collect();
        let Some(a) = normal(&vs, d) else { continue };
        for cand in [a.clone(), a.iter().map(|x| -x).collect::<IRow>()] {
            if rows.iter().all(|r| dot(&cand, r) >= 0) {
                out.insert(cand);
            }
        }
    }
    out
}

/// Hilbert basis of the full-dimensional pointed cone spanned by `gens`, by
/// enumerating every lattice point of the bounding box of the generator
/// zonotope in order of a positive grading.
pub fn brute_force_hilbert(gens: &[IRow]) -> BTreeSet<IRow> {
    let d = gens[0].len();
    let facets: Vec<IRow> = supporting(gens, d).into_iter().collect();
    let grade: IRow = (0..d).map(|j| facets.iter().map(|f| f[j]).sum()).collect();
    let lo: IRow = (0..d).map(|j| gens.iter().map(|g| g[j].min(0)).sum()).collect();
    let hi: IRow = (0..d).map(|j| gens.iter().map(|g| g[j].max(0)).sum()).collect();
    let inside = |x: &[i64]| facets.iter().all(|f| dot(f, x) >= 0);
    let mut pts = Vec::new();
    let mut x = lo.clone();
    loop {
        if x.iter().any(|v| *v != 0) && inside(&x) {
            pts.push(x.clone());
        }
        let mut j = 0;
        while j < d {
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j];
            j += 1;
        }
        if j == d {
            break;
        }
    }
    pts.sort_by_key(|p| dot(&grade, p));
    let mut basis: Vec<IRow> = Vec::new();
    for p in pts {
        let reducible = basis.iter().any(|h| {
            let diff: IRow = p.iter().zip(h).map(|(a, b)| a - b).collect();
            inside(&diff)
        });
        if !reducible {
            basis.push(p);
        }
    }
    basis.into_iter().collect()
}

pub fn big_set(rows: &[Vec<BigInt>]) -> BTreeSet<IRow> {
    rows.iter().map(|r| to_i64(r)).collect()
}

pub fn is_nonneg(x: &BigInt) -> bool {
    !x.is_negative() || x.is_zero()
}
