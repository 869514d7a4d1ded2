//! Double description method for `{x : A x >= 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{canonical_rows, clear_denominators, dot, inverse, primitive, rank, Echelon, Row};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Row,
    zeros: BitSet,
}

/// Insertion order: canonical sort, then stable by number of zero entries,
/// most zeros first.
fn insertion_order(rows: &[Row]) -> Vec<Row> {
    let mut rows = canonical_rows(rows);
    rows.sort_by_key(|r| std::cmp::Reverse(r.iter().filter(|x| x.is_zero()).count()));
    rows
}

/// Extreme rays of the pointed cone `{x in R^dim : a . x >= 0 for all rows a}`,
/// primitive and sorted lexicographically.
pub fn extreme_rays(ineqs: &[Row], dim: usize) -> Result<Vec<Row>> {
    if dim == 0 {
        return Err(crate::Error::InvalidParameter("ambient dimension must be positive".into()));
    }
    if let Some(r) = ineqs.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
    }
    let rows = insertion_order(ineqs);
    if rows.is_empty() || rank(&rows) < dim {
        return Err(Error::NonPointed);
    }

    let mut basis = Vec::with_capacity(dim);
    let mut rest = Vec::with_capacity(rows.len());
    let mut ech = Echelon::new();
    for r in rows {
        if basis.len() < dim && ech.insert(&r) {
            basis.push(r);
        } else {
            rest.push(r);
        }
    }
    let total = basis.len() + rest.len();
    let inv = inverse(&basis).expect("basis rows are independent");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|r| r[j].clone()).collect();
            let mut zeros = BitSet::new(total);
            for i in (0..dim).filter(|&i| i != j) {
                zeros.insert(i);
            }
            Ray { v: clear_denominators(&col), zeros }
        })
        .collect();

    for (offset, a) in rest.iter().enumerate() {
        let h = dim + offset;
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(h);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let z = rays[p].zeros.and(&rays[q].zeros);
                if z.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !z.subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let w: Row = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let mut zeros = z;
                zeros.insert(h);
                fresh.push(Ray { v: primitive(&w), zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(h);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<Row> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::linalg::row;
    use super::*;

    #[test]
    fn quadrant() {
        let r = extreme_rays(&[row(&[1, 0]), row(&[0, 1])], 2).unwrap();
        assert_eq!(r, vec![row(&[0, 1]), row(&[1, 0])]);
    }

    #[test]
    fn wedge() {
        let r = extreme_rays(&[row(&[0, 1]), row(&[2, -1])], 2).unwrap();
        assert_eq!(r, vec![row(&[1, 0]), row(&[1, 2])]);
    }

    #[test]
    fn square_pyramid() {
        let ineqs = vec![row(&[1, 1, 0]), row(&[1, -1, 0]), row(&[1, 0, 1]), row(&[1, 0, -1])];
        let r = extreme_rays(&ineqs, 3).unwrap();
        assert_eq!(r, vec![row(&[1, -1, -1]), row(&[1, -1, 1]), row(&[1, 1, -1]), row(&[1, 1, 1])]);
    }

    #[test]
    fn non_pointed() {
        assert_eq!(extreme_rays(&[row(&[1, 0])], 2), Err(Error::NonPointed));
        assert_eq!(extreme_rays(&[], 2), Err(Error::NonPointed));
    }

    #[test]
    fn lower_dimensional_output() {
        let r = extreme_rays(&[row(&[1, 0]), row(&[0, 1]), row(&[-1, -1])], 2).unwrap();
        assert!(r.is_empty());
        let r = extreme_rays(&[row(&[1, -1]), row(&[-1, 1]), row(&[1, 0])], 2).unwrap();
        assert_eq!(r, vec![row(&[1, 1])]);
    }
}
