//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Row = Vec<BigInt>;

pub fn row(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Row {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Primitive, nonzero, deduplicated and lexicographically sorted rows.
pub fn canonical_rows(rows: &[Row]) -> Vec<Row> {
    let mut out: Vec<Row> = rows.iter().filter(|r| !is_zero(r)).map(|r| primitive(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// Incrementally built fraction-free row echelon form.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, Row)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigInt]) -> Row {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let (a, b) = (r[*p].clone(), v[*p].clone());
            for (x, y) in v.iter_mut().zip(r) {
                *x = &a * &*x - &b * y;
            }
            v = primitive(&v);
        }
        v
    }

    /// Inserts `v` if it is independent of the stored rows.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    pub fn is_independent(&self, v: &[BigInt]) -> bool {
        !is_zero(&self.reduce(v))
    }
}

pub fn rank<'a>(rows: impl IntoIterator<Item = &'a Row>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Inverse of a square integer matrix over the rationals.
pub fn inverse(m: &[Row]) -> Option<Vec<Vec<BigRational>>> {
    let d = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<BigRational> = r.iter().map(rat).collect();
            v.extend((0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            v
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[c].clone();
        for (r, rowr) in a.iter_mut().enumerate() {
            if r == c || rowr[c].is_zero() {
                continue;
            }
            let f = rowr[c].clone();
            for (x, y) in rowr.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    Some(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// Row vector times rational matrix.
pub fn vec_mat_rat(v: &[BigInt], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, r)| acc + rat(x) * &r[j]))
        .collect()
}

/// Scales a rational vector by a positive factor to a primitive integer vector.
pub fn clear_denominators(v: &[BigRational]) -> Row {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Row = v.iter().map(|x| (x * rat(&l)).to_integer()).collect();
    primitive(&ints)
}

/// Column-style Hermite reduction: a unimodular `U` (with inverse) such that
/// `rows * U = [H | 0]` where `H` has `rank` columns.
pub struct ColumnReduction {
    pub rank: usize,
    pub u: Vec<Row>,
    pub u_inv: Vec<Row>,
}

impl ColumnReduction {
    pub fn new(rows: &[Row], dim: usize) -> Self {
        let mut m: Vec<Row> = rows.to_vec();
        let ident = |d: usize| -> Vec<Row> {
            (0..d).map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
        };
        let mut u = ident(dim);
        let mut u_inv = ident(dim);
        let mut p = 0;
        for i in 0..m.len() {
            if p == dim {
                break;
            }
            loop {
                let best = (p..dim)
                    .filter(|&j| !m[i][j].is_zero())
                    .min_by(|&a, &b| m[i][a].abs().cmp(&m[i][b].abs()));
                let Some(best) = best else { break };
                if best != p {
                    for r in m.iter_mut().chain(u.iter_mut()) {
                        r.swap(p, best);
                    }
                    u_inv.swap(p, best);
                }
                let mut done = true;
                for j in p + 1..dim {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    let q = m[i][j].div_floor(&m[i][p]);
                    if !q.is_zero() {
                        for r in m.iter_mut().chain(u.iter_mut()) {
                            let t = &r[p] * &q;
                            r[j] -= t;
                        }
                        let (rp, rj) = (u_inv[j].clone(), &mut u_inv[p]);
                        for (x, y) in rj.iter_mut().zip(&rp) {
                            *x += &q * y;
                        }
                    }
                    if !m[i][j].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if !m[i][p].is_zero() {
                p += 1;
            }
        }
        Self { rank: p, u, u_inv }
    }

    /// First `rank` coordinates of `v * U`.
    pub fn to_span(&self, v: &[BigInt]) -> Row {
        (0..self.rank).map(|j| v.iter().zip(&self.u).map(|(x, r)| x * &r[j]).sum()).collect()
    }

    /// `[y | 0] * U^{-1}`.
    pub fn from_span(&self, y: &[BigInt]) -> Row {
        let d = self.u.len();
        (0..d).map(|j| y.iter().zip(&self.u_inv).map(|(x, r)| x * &r[j]).sum()).collect()
    }

    /// A functional on the span pulled back to the ambient space: `U[:, ..rank] a`.
    pub fn functional_from_span(&self, a: &[BigInt]) -> Row {
        self.u.iter().map(|r| r[..self.rank].iter().zip(a).map(|(x, y)| x * y).sum()).collect()
    }

    /// Functionals vanishing on the span: the trailing columns of `U`.
    pub fn equations(&self) -> Vec<Row> {
        (self.rank..self.u.len()).map(|j| self.u.iter().map(|r| r[j].clone()).collect()).collect()
    }
}

/// Upper triangular basis with positive diagonal of the row lattice of a
/// square nonsingular integer matrix.
pub fn row_hermite(m: &[Row]) -> Vec<Row> {
    let mut a = m.to_vec();
    let k = a.len();
    for c in 0..k {
        loop {
            let best = (c..k).filter(|&r| !a[r][c].is_zero()).min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(best) = best else { break };
            a.swap(c, best);
            let mut done = true;
            for r in c + 1..k {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[c][c]);
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[c][c].is_negative() {
            for x in a[c].iter_mut() {
                *x = -&*x;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_primitive() {
        assert_eq!(primitive(&row(&[4, -6, 0])), row(&[2, -3, 0]));
        assert_eq!(rank(&[row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[row(&[0, 0])]), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![row(&[2, 1]), row(&[1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][0], BigRational::from_integer(1.into()));
        assert_eq!(inv[0][1], BigRational::from_integer((-1).into()));
        assert!(inverse(&[row(&[1, 2]), row(&[2, 4])]).is_none());
    }

    #[test]
    fn column_reduction_spans() {
        let rows = vec![row(&[2, 4, 6]), row(&[1, 3, 5])];
        let cr = ColumnReduction::new(&rows, 3);
        assert_eq!(cr.rank, 2);
        for r in &rows {
            let y = cr.to_span(r);
            assert_eq!(&cr.from_span(&y), r);
        }
        for e in cr.equations() {
            for r in &rows {
                assert!(dot(&e, r).is_zero());
            }
        }
    }

    #[test]
    fn hermite_is_triangular() {
        let h = row_hermite(&[row(&[1, 2]), row(&[3, 1])]);
        assert!(h[1][0].is_zero());
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(5));
    }
}
