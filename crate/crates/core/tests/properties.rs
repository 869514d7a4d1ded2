mod common;

use std::collections::BTreeSet;

use blowup_core::cone::{self, hilbert_basis, RationalCone};
use blowup_core::lattice::{orbit, orbit_size, pair, BlowupSpace, CurveClass, DivisorClass};
use blowup_core::pipeline::{cone_method, x235_bundle, x346_bundle};
use blowup_core::secant::{vanishing_order_along_c, SparsePoly};
use blowup_core::{BigInt, BigRational};
use common::{supporting, to_big, IRow};
use proptest::prelude::*;

/// Generators with positive first coordinate, so the cone is pointed.
fn pointed_gens(dim: usize, count: std::ops::Range<usize>, bound: i64) -> impl Strategy<Value = Vec<IRow>> {
    proptest::collection::vec(
        (1..=bound, proptest::collection::vec(-bound..=bound, dim - 1)).prop_map(|(h, mut rest)| {
            rest.insert(0, h);
            rest
        }),
        count,
    )
}

fn full_rank(rows: &[IRow]) -> bool {
    let big: Vec<_> = rows.iter().map(|r| to_big(r)).collect();
    cone::linalg::rank(&big) == rows[0].len()
}

fn rows_set(rows: &[Vec<BigInt>]) -> BTreeSet<IRow> {
    common::big_set(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facets_and_rays_match_brute_force(dim in 2usize..=5, seed in pointed_gens(5, 3..9, 3)) {
        let gens: Vec<IRow> = seed.iter().map(|g| g[..dim].to_vec()).collect();
        prop_assume!(full_rank(&gens));
        let big: Vec<_> = gens.iter().map(|g| to_big(g)).collect();
        let from_gens = cone::inequalities_from_rays(&big, dim).unwrap();
        let facets = rows_set(from_gens.inequalities.as_deref().unwrap());
        prop_assert_eq!(&facets, &supporting(&gens, dim));
        let facet_rows: Vec<IRow> = facets.iter().cloned().collect();
        let back = cone::rays_from_inequalities(&facet_rows.iter().map(|r| to_big(r)).collect::<Vec<_>>(), dim).unwrap();
        let rays = rows_set(back.generators.as_deref().unwrap());
        prop_assert_eq!(&rays, &supporting(&facet_rows, dim));
        let extremal = rows_set(&RationalCone::from_generators(&big, dim).unwrap().extremal_rays().unwrap());
        prop_assert_eq!(rays, extremal);
    }

    #[test]
    fn hilbert_basis_matches_enumeration(dim in 2usize..=4, seed in pointed_gens(4, 2..6, 2)) {
        let gens: Vec<IRow> = seed.iter().map(|g| g[..dim].to_vec()).collect();
        prop_assume!(full_rank(&gens));
        let big: Vec<_> = gens.iter().map(|g| to_big(g)).collect();
        let c = RationalCone::from_generators(&big, dim).unwrap();
        let hb = rows_set(&hilbert_basis(&c).unwrap().elements);
        prop_assert_eq!(hb, common::brute_force_hilbert(&gens));
    }

    #[test]
    fn pairing_is_bilinear_and_symmetric(
        d in proptest::collection::vec(-6i64..6, 7),
        e in proptest::collection::vec(-6i64..6, 7),
        c in proptest::collection::vec(-6i64..6, 7),
        k in -4i64..4,
        perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let sp = BlowupSpace::nn1(2, 5);
        let (d, e, c) = (DivisorClass::from_i64(&d), DivisorClass::from_i64(&e), CurveClass::from_i64(&c));
        let k = BigInt::from(k);
        let lhs = pair(&sp, &d.scale(&k).add(&e), &c).unwrap();
        prop_assert_eq!(lhs, &k * pair(&sp, &d, &c).unwrap() + pair(&sp, &e, &c).unwrap());
        let pd = DivisorClass::new(d.d1.clone(), d.d2.clone(), perm.iter().map(|&i| d.mults[i].clone()).collect());
        let pc = CurveClass::new(c.a1.clone(), c.a2.clone(), perm.iter().map(|&i| c.excs[i].clone()).collect());
        prop_assert_eq!(pair(&sp, &pd, &pc).unwrap(), pair(&sp, &d, &c).unwrap());
    }

    #[test]
    fn orbit_canonical_form(
        row in proptest::collection::vec(-3i64..4, 8),
        perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let sp = BlowupSpace::nn1(3, 6);
        let d = DivisorClass::from_i64(&row);
        let p = DivisorClass::new(d.d1.clone(), d.d2.clone(), perm.iter().map(|&i| d.mults[i].clone()).collect());
        prop_assert_eq!(p.canonical_rep(), d.canonical_rep());
        let orb = orbit(&sp, &d);
        prop_assert_eq!(orb.len(), orbit_size(&d));
        prop_assert!(orb.contains(&p));
        prop_assert!(orb.iter().all(|x| x.canonical_rep() == d.canonical_rep()));
    }
}

fn poly(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -5i64..6), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(SparsePoly::zero(nvars), |acc, (e, c)| {
            acc.add(&SparsePoly::monomial(blowup_core::secant::Monomial(e), BigRational::from_integer(c.into())))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn polynomial_ring_laws(a in poly(3), b in poly(3), c in poly(3), pt in proptest::collection::vec(-3i64..4, 3)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&SparsePoly::one(3)), a.clone());
        let pt: Vec<BigRational> = pt.into_iter().map(|x| BigRational::from_integer(x.into())).collect();
        prop_assert_eq!(a.mul(&b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        let leibniz = a.derivative(1).mul(&b).add(&a.mul(&b.derivative(1)));
        prop_assert_eq!(a.mul(&b).derivative(1), leibniz);
    }
}

#[test]
fn effective_contains_movable_candidates() {
    for config in [x235_bundle().unwrap(), x346_bundle().unwrap()] {
        let out = cone_method(&config).unwrap();
        for g in out.movable.generators.as_deref().unwrap() {
            assert!(out.effective.contains(g).unwrap(), "{:?} not in the effective cone", g);
        }
        for f in &config.fixed {
            assert!(out.effective.contains(&f.to_row()).unwrap());
        }
    }
}

#[test]
fn vanishing_order_n8() {
    let v = vanishing_order_along_c(8).unwrap();
    assert_eq!((v.k, v.order), (6, 6));
}
