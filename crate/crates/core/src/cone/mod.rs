//! Exact rational polyhedral cones.

mod dd;
mod format;
mod hilbert;
pub mod linalg;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use dd::extreme_rays;
pub use format::{parse_cone_json, parse_cone_text, row_json, ConeFile};
pub use hilbert::{hilbert_basis, HilbertBasis, HILBERT_DIM_LIMIT};
use linalg::{canonical_rows, dot, rank, ColumnReduction, Row};

use crate::{Error, Result};

/// A cone carried by generator rows and/or inequality rows `a . x >= 0`.
///
/// When the cone is not full-dimensional, `equations` holds functionals that
/// vanish on its span and `inequalities` are facets taken inside that span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCone {
    pub ambient_dim: usize,
    pub generators: Option<Vec<Row>>,
    pub inequalities: Option<Vec<Row>>,
    #[serde(default)]
    pub equations: Vec<Row>,
    #[serde(default)]
    pub lower_dimensional: bool,
}

fn check_dims(rows: &[Row], dim: usize) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::DimensionMismatch { expected: dim, got: r.len() }),
        None => Ok(()),
    }
}

/// Extreme rays of `{x : A x >= 0}` together with the canonicalized inequalities.
pub fn rays_from_inequalities(ineqs: &[Row], ambient_dim: usize) -> Result<RationalCone> {
    check_dims(ineqs, ambient_dim)?;
    let rays = extreme_rays(ineqs, ambient_dim)?;
    let lower = rank(&rays) < ambient_dim;
    Ok(RationalCone {
        ambient_dim,
        generators: Some(rays),
        inequalities: Some(canonical_rows(ineqs)),
        equations: Vec::new(),
        lower_dimensional: lower,
    })
}

/// Facets of the cone spanned by `gens`. For a cone that is not
/// full-dimensional, facets are computed inside its span and reported
/// together with the equations of the span.
pub fn inequalities_from_rays(gens: &[Row], ambient_dim: usize) -> Result<RationalCone> {
    check_dims(gens, ambient_dim)?;
    let gens = canonical_rows(gens);
    if gens.is_empty() {
        return Err(Error::ZeroGenerators);
    }
    let red = ColumnReduction::new(&gens, ambient_dim);
    let (facets, equations) = if red.rank == ambient_dim {
        (extreme_rays(&gens, ambient_dim)?, Vec::new())
    } else {
        let local: Vec<Row> = gens.iter().map(|g| red.to_span(g)).collect();
        let f = extreme_rays(&local, red.rank)?;
        let eqs = canonical_rows(&red.equations());
        (canonical_rows(&f.iter().map(|a| red.functional_from_span(a)).collect::<Vec<_>>()), eqs)
    };
    Ok(RationalCone {
        ambient_dim,
        generators: Some(gens),
        inequalities: Some(facets),
        equations,
        lower_dimensional: red.rank < ambient_dim,
    })
}

impl RationalCone {
    pub fn from_generators(gens: &[Row], ambient_dim: usize) -> Result<Self> {
        inequalities_from_rays(gens, ambient_dim)
    }

    pub fn from_inequalities(ineqs: &[Row], ambient_dim: usize) -> Result<Self> {
        rays_from_inequalities(ineqs, ambient_dim)
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        Ok(())
    }

    /// Fills in whichever description is missing.
    pub fn synchronized(&self) -> Result<Self> {
        match (&self.generators, &self.inequalities) {
            (Some(_), Some(_)) => Ok(self.clone()),
            (Some(g), None) => inequalities_from_rays(g, self.ambient_dim),
            (None, Some(a)) => {
                let mut rows = a.clone();
                for e in &self.equations {
                    rows.push(e.clone());
                    rows.push(e.iter().map(|x| -x).collect());
                }
                let mut c = rays_from_inequalities(&rows, self.ambient_dim)?;
                c.inequalities = Some(canonical_rows(a));
                c.equations = self.equations.clone();
                Ok(c)
            }
            (None, None) => Err(Error::ZeroGenerators),
        }
    }

    fn facets_and_equations(&self) -> Result<(Vec<Row>, Vec<Row>)> {
        let c = if self.inequalities.is_some() { self.clone() } else { self.synchronized()? };
        Ok((c.inequalities.unwrap_or_default(), c.equations))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_dim(v)?;
        let (ineqs, eqs) = self.facets_and_equations()?;
        Ok(ineqs.iter().all(|a| !dot(a, v).is_negative()) && eqs.iter().all(|e| dot(e, v).is_zero()))
    }

    /// True iff `v` spans an extremal ray: `v` lies in the cone and the
    /// tight inequalities (with the span equations) have rank `dim - 1`.
    pub fn is_extremal(&self, v: &[BigInt]) -> Result<bool> {
        if !self.contains(v)? || linalg::is_zero(v) {
            return Ok(false);
        }
        let (ineqs, eqs) = self.facets_and_equations()?;
        let tight: Vec<Row> = ineqs.into_iter().filter(|a| dot(a, v).is_zero()).chain(eqs).collect();
        Ok(rank(&tight) + 1 == self.ambient_dim)
    }

    /// The extremal rays, primitive and sorted.
    pub fn extremal_rays(&self) -> Result<Vec<Row>> {
        let c = self.synchronized()?;
        let mut out = Vec::new();
        for g in c.generators.as_deref().unwrap_or_default() {
            if c.is_extremal(g)? {
                out.push(g.clone());
            }
        }
        Ok(canonical_rows(&out))
    }

    /// Pointed iff the inequalities and equations have full rank.
    pub fn is_pointed(&self) -> Result<bool> {
        let (ineqs, eqs) = self.facets_and_equations()?;
        Ok(rank(ineqs.iter().chain(&eqs)) == self.ambient_dim)
    }
}

pub fn contains(cone: &RationalCone, v: &[BigInt]) -> Result<bool> {
    cone.contains(v)
}

pub fn is_extremal(cone: &RationalCone, v: &[BigInt]) -> Result<bool> {
    cone.is_extremal(v)
}

/// Equality by mutual containment of generators.
pub fn equal(a: &RationalCone, b: &RationalCone) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim, got: b.ambient_dim });
    }
    let (a, b) = (a.synchronized()?, b.synchronized()?);
    for g in a.generators.as_deref().unwrap_or_default() {
        if !b.contains(g)? {
            return Ok(false);
        }
    }
    for g in b.generators.as_deref().unwrap_or_default() {
        if !a.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::linalg::row;
    use super::*;

    #[test]
    fn quadrant_round_trip() {
        let c = rays_from_inequalities(&[row(&[1, 0]), row(&[0, 1])], 2).unwrap();
        assert_eq!(c.generators.as_ref().unwrap(), &vec![row(&[0, 1]), row(&[1, 0])]);
        let d = inequalities_from_rays(c.generators.as_ref().unwrap(), 2).unwrap();
        assert_eq!(d.inequalities.as_ref().unwrap(), &vec![row(&[0, 1]), row(&[1, 0])]);
        assert!(equal(&c, &d).unwrap());
        assert!(c.contains(&row(&[2, 3])).unwrap());
        assert!(!c.contains(&row(&[-1, 3])).unwrap());
    }

    #[test]
    fn single_ray_is_lower_dimensional() {
        let c = inequalities_from_rays(&[row(&[1, 1])], 2).unwrap();
        assert!(c.lower_dimensional);
        assert_eq!(c.equations.len(), 1);
        assert!(c.contains(&row(&[3, 3])).unwrap());
        assert!(!c.contains(&row(&[3, 2])).unwrap());
        assert!(!c.contains(&row(&[-1, -1])).unwrap());
        assert!(c.is_extremal(&row(&[2, 2])).unwrap());
    }

    #[test]
    fn extremality() {
        let c = inequalities_from_rays(&[row(&[1, 0]), row(&[1, 1]), row(&[1, 2])], 2).unwrap();
        assert!(c.is_extremal(&row(&[1, 0])).unwrap());
        assert!(!c.is_extremal(&row(&[1, 1])).unwrap());
        assert_eq!(c.extremal_rays().unwrap(), vec![row(&[1, 0]), row(&[1, 2])]);
    }

    #[test]
    fn zero_generators_rejected() {
        assert_eq!(inequalities_from_rays(&[], 2), Err(Error::ZeroGenerators));
        assert_eq!(inequalities_from_rays(&[row(&[0, 0])], 2), Err(Error::ZeroGenerators));
    }

    #[test]
    fn dimension_mismatch() {
        let c = rays_from_inequalities(&[row(&[1, 0]), row(&[0, 1])], 2).unwrap();
        assert!(c.contains(&row(&[1, 0, 0])).is_err());
    }
}
