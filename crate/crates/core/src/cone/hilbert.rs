//! Hilbert bases of pointed cones by pulling triangulation and enumeration of
//! fundamental parallelepipeds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{dot, inverse, rank, row_hermite, vec_mat_rat, ColumnReduction, Row};
use super::{extreme_rays, RationalCone};
use crate::{Error, Result};

pub const HILBERT_DIM_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    pub elements: Vec<Row>,
}

pub fn hilbert_basis(cone: &RationalCone) -> Result<HilbertBasis> {
    if cone.ambient_dim > HILBERT_DIM_LIMIT {
        return Err(Error::DimensionGuard { dim: cone.ambient_dim, limit: HILBERT_DIM_LIMIT });
    }
    if !cone.is_pointed()? {
        return Err(Error::NonPointed);
    }
    let rays = cone.extremal_rays()?;
    if rays.is_empty() {
        return Ok(HilbertBasis { elements: Vec::new() });
    }
    let red = ColumnReduction::new(&rays, cone.ambient_dim);
    let k = red.rank;
    let local: Vec<Row> = rays.iter().map(|r| red.to_span(r)).collect();
    let facets = extreme_rays(&local, k)?;
    let incidences: Vec<BTreeSet<usize>> = facets
        .iter()
        .map(|f| (0..local.len()).filter(|&i| dot(f, &local[i]).is_zero()).collect())
        .collect();

    let all: Vec<usize> = (0..local.len()).collect();
    let mut simplices = Vec::new();
    triangulate(&all, k, &local, &incidences, &mut simplices);

    let mut candidates: BTreeSet<Row> = local.iter().cloned().collect();
    for simplex in &simplices {
        let basis: Vec<Row> = simplex.iter().map(|&i| local[i].clone()).collect();
        parallelepiped_points(&basis, &mut candidates);
    }

    let in_cone = |v: &Row| facets.iter().all(|f| !dot(f, v).is_negative());
    let cands: Vec<Row> = candidates.into_iter().collect();
    let irreducible: Vec<Row> = cands
        .iter()
        .filter(|x| {
            !cands.iter().any(|y| {
                if y == *x {
                    return false;
                }
                let diff: Row = x.iter().zip(y).map(|(a, b)| a - b).collect();
                in_cone(&diff)
            })
        })
        .cloned()
        .collect();

    let mut elements: Vec<Row> = irreducible.iter().map(|y| red.from_span(y)).collect();
    elements.sort();
    Ok(HilbertBasis { elements })
}

/// Pulling triangulation of the face spanned by `face` (indices into `rays`)
/// of dimension `dim`.
fn triangulate(face: &[usize], dim: usize, rays: &[Row], incidences: &[BTreeSet<usize>], out: &mut Vec<Vec<usize>>) {
    if face.len() == dim {
        out.push(face.to_vec());
        return;
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for z in incidences {
        let sub: Vec<usize> = face.iter().copied().filter(|i| z.contains(i)).collect();
        if sub.len() == face.len() || sub.len() + 1 < dim || sub.contains(&apex) {
            continue;
        }
        if facets.contains(&sub) {
            continue;
        }
        if rank(sub.iter().map(|&i| &rays[i])) + 1 == dim {
            facets.insert(sub);
        }
    }
    for f in facets {
        let mut inner = Vec::new();
        triangulate(&f, dim - 1, rays, incidences, &mut inner);
        for mut s in inner {
            s.push(apex);
            out.push(s);
        }
    }
}

/// Adds every nonzero lattice point of the half-open parallelepiped spanned by
/// `basis` (a square nonsingular matrix).
fn parallelepiped_points(basis: &[Row], out: &mut BTreeSet<Row>) {
    let k = basis.len();
    let inv = inverse(basis).expect("simplicial cone basis is nonsingular");
    let hnf = row_hermite(basis);
    let diag: Vec<BigInt> = (0..k).map(|i| hnf[i][i].clone()).collect();
    let mut x: Row = vec![BigInt::zero(); k];
    loop {
        let lambda = vec_mat_rat(&x, &inv);
        let frac: Vec<BigRational> = lambda.iter().map(|l| l - l.floor()).collect();
        if frac.iter().any(|f| !f.is_zero()) {
            let y: Row = (0..k)
                .map(|j| {
                    let v = frac
                        .iter()
                        .zip(basis)
                        .fold(BigRational::zero(), |acc, (f, b)| acc + f * BigRational::from_integer(b[j].clone()));
                    v.to_integer()
                })
                .collect();
            out.insert(y);
        }
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            x[i] += 1;
            if x[i] < diag[i] {
                break;
            }
            x[i] = BigInt::zero();
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::linalg::row;
    use super::super::inequalities_from_rays;
    use super::*;

    #[test]
    fn wedge_basis() {
        let c = inequalities_from_rays(&[row(&[1, 0]), row(&[1, 2])], 2).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.elements, vec![row(&[1, 0]), row(&[1, 1]), row(&[1, 2])]);
    }

    #[test]
    fn quadrant_basis() {
        let c = inequalities_from_rays(&[row(&[1, 0]), row(&[0, 1])], 2).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap().elements, vec![row(&[0, 1]), row(&[1, 0])]);
    }

    #[test]
    fn lower_dimensional_span() {
        let c = inequalities_from_rays(&[row(&[1, 0, 1]), row(&[1, 2, 1])], 3).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.elements, vec![row(&[1, 0, 1]), row(&[1, 1, 1]), row(&[1, 2, 1])]);
    }

    #[test]
    fn non_simplicial() {
        let gens = vec![row(&[1, 0, 0]), row(&[0, 1, 0]), row(&[1, 0, 1]), row(&[0, 1, 1])];
        let c = inequalities_from_rays(&gens, 3).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.elements.len(), 4);
    }

    #[test]
    fn guard() {
        let gens: Vec<Row> = (0..13).map(|i| (0..13).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        let c = inequalities_from_rays(&gens, 13).unwrap();
        assert!(matches!(hilbert_basis(&c), Err(Error::DimensionGuard { .. })));
    }
}
