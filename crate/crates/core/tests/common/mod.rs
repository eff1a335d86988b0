//! Strategies and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::OnceLock;

use cremona_contact::algebra::{Monomial, MultiPoly, RatFunc, Q};
use cremona_contact::catalog::registry;
use cremona_contact::chart::{Chart, PlaneVars};
use cremona_contact::contact::analyze;
use cremona_contact::families::{aut_p3_contact, kernel_family, klein_embed};
use cremona_contact::maps::RationalMap;
use cremona_contact::parse::{parse_map, parse_ratfunc};
use proptest::prelude::*;

pub const CASES: u32 = 128;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn r(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

pub fn map(s: &str) -> RationalMap {
    parse_map(s, PlaneVars::Z0Z1).unwrap()
}

pub fn small_q() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

pub fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |x| *x != q(0))
}

/// Sparse polynomial in the given variables, total degree at most `deg`.
pub fn poly_in(vars: &'static [usize], deg: u32, terms: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0..=deg, vars.len()), small_q());
    prop::collection::vec(term, 0..=terms).prop_map(move |ts| {
        MultiPoly::from_terms(ts.into_iter().filter_map(|(es, c)| {
            let mut m = [0u32; 4];
            for (v, e) in vars.iter().zip(es) {
                m[*v] = e;
            }
            (m.iter().sum::<u32>() <= deg).then_some((Monomial(m), c))
        }))
    })
}

pub fn nonzero_poly_in(vars: &'static [usize], deg: u32, terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly_in(vars, deg, terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn nonconstant_poly_in(vars: &'static [usize], deg: u32, terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly_in(vars, deg, terms).prop_filter("nonconstant", |p| !p.is_constant())
}

pub fn ratfunc_in(vars: &'static [usize], deg: u32) -> impl Strategy<Value = RatFunc> {
    (poly_in(vars, deg, 3), nonzero_poly_in(vars, deg, 3))
        .prop_map(|(n, d)| RatFunc::reduce(n, d).expect("nonzero denominator"))
}

pub fn nonzero_ratfunc_in(vars: &'static [usize], deg: u32) -> impl Strategy<Value = RatFunc> {
    ratfunc_in(vars, deg).prop_filter("nonzero", |r| !r.is_zero())
}

pub const XYZ: &[usize] = &[0, 1, 2];
pub const XY: &[usize] = &[0, 1];
pub const Z1: &[usize] = &[1];
pub const Z0: &[usize] = &[0];

/// 3-dimensional catalog maps of the standard chart that preserve `c(ω)`.
pub fn contact_catalog() -> &'static [RationalMap] {
    static CELL: OnceLock<Vec<RationalMap>> = OnceLock::new();
    CELL.get_or_init(|| {
        registry()
            .into_iter()
            .filter(|e| e.map.chart() == Chart::AFFINE)
            .filter(|e| analyze(&e.map).is_ok_and(|r| r.is_contact))
            .map(|e| e.map)
            .collect()
    })
}

/// Contact catalog maps of low degree, used where compositions pile up.
pub fn light_contact_catalog() -> &'static [RationalMap] {
    static CELL: OnceLock<Vec<RationalMap>> = OnceLock::new();
    CELL.get_or_init(|| contact_catalog().iter().filter(|m| m.degree() <= 4).cloned().collect())
}

pub fn catalog_contact_map() -> impl Strategy<Value = RationalMap> {
    let n = contact_catalog().len();
    (0..n).prop_map(|i| contact_catalog()[i].clone())
}

pub fn light_contact_map() -> impl Strategy<Value = RationalMap> {
    let n = light_contact_catalog().len();
    (0..n).prop_map(|i| light_contact_catalog()[i].clone())
}

/// Plane birational maps in `(z1, z2)` built from affine, triangular and
/// Cremona generators.
pub fn plane12_map() -> impl Strategy<Value = RationalMap> {
    plane12_words(3, 2)
}

/// Short words in low-degree generators, cheap enough to iterate.
pub fn light_plane12_map() -> impl Strategy<Value = RationalMap> {
    plane12_words(2, 2)
}

fn plane12_words(shear_degree: u32, max_len: usize) -> impl Strategy<Value = RationalMap> {
    let affine = (nonzero_q(), nonzero_q(), small_q(), small_q()).prop_map(|(a, d, b, c)| {
        RationalMap::new(
            Chart::PLANE12,
            vec![
                &(&RatFunc::constant(a) * &RatFunc::var(1)) + &RatFunc::constant(b),
                &(&RatFunc::constant(d) * &RatFunc::var(2)) + &RatFunc::constant(c),
            ],
        )
        .unwrap()
    });
    let triangular = poly_in(&[2], shear_degree, 2).prop_map(|p| {
        RationalMap::new(Chart::PLANE12, vec![&RatFunc::var(1) + &RatFunc::from_poly(p), RatFunc::var(2)]).unwrap()
    });
    let fixed = prop_oneof![
        Just(map("chart=plane12 (1/z1, 1/z2)")),
        Just(map("chart=plane12 (z2, (z2 + 1)/z1)")),
        Just(map("chart=plane12 (z2, z1)")),
        Just(map("chart=plane12 (z1, z1*z2)")),
    ];
    let generator = prop_oneof![affine, triangular, fixed];
    prop::collection::vec(generator, 1..=max_len).prop_map(|gs| {
        gs.iter().skip(1).fold(gs[0].clone(), |acc, g| acc.compose(g).unwrap())
    })
}

/// A member of the Klein family: `𝒦` of a random plane map.
pub fn klein_map() -> impl Strategy<Value = RationalMap> {
    plane12_map().prop_map(|p| klein_embed(&p).unwrap())
}

/// Random `ω`-preserving maps: kernel-family maps, lifted shears and
/// unimodular affine contact maps.
pub fn omega_preserving_map() -> impl Strategy<Value = RationalMap> {
    let kernel = poly_in(Z1, 3, 3).prop_map(|f| kernel_family(&RatFunc::from_poly(f)).unwrap());
    let shear = poly_in(Z0, 2, 2).prop_map(|p| {
        // (z0, z1 + p(z0), z2 − ∫ z0 p'(z0) dz0)
        let dp = p.derive(0);
        let integrand = &MultiPoly::var(0) * &dp;
        let b = integrate_z0(&integrand);
        RationalMap::new(
            Chart::AFFINE,
            vec![
                RatFunc::var(0),
                &RatFunc::var(1) + &RatFunc::from_poly(p),
                &RatFunc::var(2) - &RatFunc::from_poly(b),
            ],
        )
        .unwrap()
    });
    let affine = (nonzero_q(), small_q(), small_q(), small_q()).prop_map(|(e, l, g, d)| {
        let beta = e.recip();
        aut_p3_contact(&e, &beta, &l, &g, &d).unwrap()
    });
    prop::collection::vec(prop_oneof![kernel, shear, affine], 1..=2).prop_map(|gs| {
        gs.iter().skip(1).fold(gs[0].clone(), |acc, g| acc.compose(g).unwrap())
    })
}

fn integrate_z0(p: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(p.terms().iter().map(|(m, c)| {
        let mut e = m.0;
        e[0] += 1;
        (Monomial(e), c / q(e[0] as i64))
    }))
}

/// Area-preserving plane maps in `(z0, z1)` whose lift exists: compositions
/// of shears and the rotation `(z1, −z0)`.
pub fn exact_plane_map() -> impl Strategy<Value = RationalMap> {
    let shear0 = poly_in(Z1, 3, 2).prop_map(|p| {
        RationalMap::new(Chart::PLANE01, vec![&RatFunc::var(0) + &RatFunc::from_poly(p), RatFunc::var(1)]).unwrap()
    });
    let shear1 = poly_in(Z0, 3, 2).prop_map(|p| {
        RationalMap::new(Chart::PLANE01, vec![RatFunc::var(0), &RatFunc::var(1) + &RatFunc::from_poly(p)]).unwrap()
    });
    let rot = Just(map("(z1, -z0)"));
    let mono = Just(map("(z0^2*z1, 1/z0)"));
    prop::collection::vec(prop_oneof![shear0, shear1, rot, mono], 1..=3).prop_map(|gs| {
        gs.iter().skip(1).fold(gs[0].clone(), |acc, g| acc.compose(g).unwrap())
    })
}

/// Plane polynomial automorphisms in `(z0, z1)` with constant jacobian.
pub fn polynomial_automorphism() -> impl Strategy<Value = RationalMap> {
    let shear0 = poly_in(Z1, 3, 2).prop_map(|p| {
        RationalMap::new(Chart::PLANE01, vec![&RatFunc::var(0) + &RatFunc::from_poly(p), RatFunc::var(1)]).unwrap()
    });
    let shear1 = poly_in(Z0, 3, 2).prop_map(|p| {
        RationalMap::new(Chart::PLANE01, vec![RatFunc::var(0), &RatFunc::var(1) + &RatFunc::from_poly(p)]).unwrap()
    });
    let scale = (nonzero_q(), nonzero_q()).prop_map(|(a, b)| {
        RationalMap::new(
            Chart::PLANE01,
            vec![&RatFunc::constant(a) * &RatFunc::var(0), &RatFunc::constant(b) * &RatFunc::var(1)],
        )
        .unwrap()
    });
    prop::collection::vec(prop_oneof![shear0, shear1, scale], 1..=3).prop_map(|gs| {
        gs.iter().skip(1).fold(gs[0].clone(), |acc, g| acc.compose(g).unwrap())
    })
}
