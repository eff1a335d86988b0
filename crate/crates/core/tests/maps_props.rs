mod common;

use common::*;
use cremona_contact::algebra::Q;
use cremona_contact::chart::Chart;
use cremona_contact::families::{aut_p3_contact, cremona, henon, klein_embed, legendre_involution, lyness, pgl2};
use cremona_contact::maps::{HInftyKind, RationalMap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rq(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[test]
fn composition_examples() {
    let l = legendre_involution();
    assert!(l.compose(&l).unwrap().is_identity());
    let id = RationalMap::identity(Chart::AFFINE);
    assert_eq!(l.compose(&id).unwrap(), l);
    let k = klein_embed(&lyness()).unwrap();
    assert!(k.iterate(5).unwrap().is_identity());
    assert!(!k.iterate(4).unwrap().is_identity());
}

#[test]
fn iterate_examples() {
    assert!(RationalMap::identity(Chart::AFFINE).iterate(7).unwrap().is_identity());
    assert_eq!(henon().iterate(3).unwrap().degree(), 8);
    assert!(lyness().iterate(5).unwrap().is_identity());
}

#[test]
fn jacobian_examples() {
    assert_eq!(legendre_involution().jacobian_det().unwrap(), r("1"));
    assert_eq!(RationalMap::identity(Chart::AFFINE).jacobian_det().unwrap(), r("1"));
    let aut = aut_p3_contact(&q(2), &q(3), &q(0), &q(0), &q(0)).unwrap();
    assert_eq!(aut.jacobian_det().unwrap(), r("36"));
}

#[test]
fn inverse_examples() {
    let ks = klein_embed(&cremona()).unwrap();
    assert!(ks.verify_inverse(&ks).unwrap());
    let id = RationalMap::identity(Chart::AFFINE);
    assert!(id.verify_inverse(&id).unwrap());
    assert!(map("(z0 + z1^2, z1)").verify_inverse(&map("(z0 - z1^2, z1)")).unwrap());
    assert!(!map("(z0 + z1^2, z1)").verify_inverse(&map("(z0 + z1^2, z1)")).unwrap());
}

#[test]
fn homogenize_examples() {
    let id = RationalMap::identity(Chart::AFFINE);
    assert_eq!(id.homogenize().unwrap().to_string(), "(z0 : z1 : z2 : z3)");
    assert_eq!(
        legendre_involution().homogenize().unwrap().to_string(),
        "(z1*z3 : z0*z3 : -z0*z1 - z2*z3 : z3^2)"
    );
    assert_eq!(map("(z0^2, z1, z2)").homogenize().unwrap().to_string(), "(z0^2 : z1*z3 : z2*z3 : z3^2)");
}

#[test]
fn degree_examples() {
    assert_eq!(RationalMap::identity(Chart::AFFINE).degree(), 1);
    assert_eq!(legendre_involution().degree(), 2);
    assert_eq!(cremona().degree(), 2);
}

#[test]
fn hinfty_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let aut = aut_p3_contact(&q(2), &rq(1, 3), &q(1), &q(-1), &q(5)).unwrap();
    let a = aut.homogenize().unwrap().hinfty_action(&mut rng).unwrap();
    assert_eq!(a.kind, HInftyKind::Preserved);

    let jonq = klein_embed(&map("chart=plane12 (2*z1 + 1, -z2 + z1^3 + z1)")).unwrap();
    let a = jonq.homogenize().unwrap().hinfty_action(&mut rng).unwrap();
    assert_eq!(a.kind, HInftyKind::ContractedToPoint(vec![q(0), q(0), q(1), q(0)]));

    let curve = klein_embed(&map("chart=plane12 (z1/z2, 1/z2)")).unwrap();
    let a = curve.homogenize().unwrap().hinfty_action(&mut rng).unwrap();
    assert_eq!(a.kind, HInftyKind::ContractedToCurve);
}

#[test]
fn klein_of_cremona_is_explicit() {
    // 𝒦(σ) = (z0 z1²/z2², 1/z1, 1/z2)
    assert_eq!(klein_embed(&cremona()).unwrap(), map("(z0*z1^2/z2^2, 1/z1, 1/z2)"));
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn composition_is_associative(a in light_contact_map(), b in light_contact_map(), c in light_contact_map()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn jacobian_chain_rule(a in light_contact_map(), b in light_contact_map()) {
        let lhs = a.compose(&b).unwrap().jacobian_det().unwrap();
        let rhs = &b.pull(&a.jacobian_det().unwrap()).unwrap() * &b.jacobian_det().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn plane_jacobian_chain_rule(a in plane12_map(), b in plane12_map()) {
        let lhs = a.compose(&b).unwrap().jacobian_det().unwrap();
        let rhs = &b.pull(&a.jacobian_det().unwrap()).unwrap() * &b.jacobian_det().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dehomogenize_inverts_homogenize(a in catalog_contact_map(), b in klein_map()) {
        prop_assert_eq!(a.homogenize().unwrap().dehomogenize().unwrap(), a);
        prop_assert_eq!(b.homogenize().unwrap().dehomogenize().unwrap(), b);
    }

    #[test]
    fn degree_ignores_affine_changes(
        phi in light_contact_map(),
        e in nonzero_q(), b in nonzero_q(), l in small_q(), g in small_q(), d in small_q(),
        e2 in nonzero_q(), b2 in nonzero_q(),
    ) {
        let left = aut_p3_contact(&e, &b, &l, &g, &d).unwrap();
        let right = aut_p3_contact(&e2, &b2, &g, &l, &d).unwrap();
        let deg = phi.degree();
        prop_assert_eq!(left.compose(&phi).unwrap().degree(), deg);
        prop_assert_eq!(phi.compose(&right).unwrap().degree(), deg);
        prop_assert_eq!(RationalMap::identity(Chart::AFFINE).degree(), 1);
    }

    #[test]
    fn degree_matches_the_homogenization(a in catalog_contact_map(), b in klein_map()) {
        for m in [a, b] {
            prop_assert_eq!(m.degree(), m.homogenize().unwrap().degree());
        }
    }

    #[test]
    fn klein_embedding_is_a_homomorphism(a in plane12_map(), b in plane12_map()) {
        let lhs = klein_embed(&a.compose(&b).unwrap()).unwrap();
        let rhs = klein_embed(&a).unwrap().compose(&klein_embed(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pgl2_is_closed_under_composition(m in prop::array::uniform4(small_q()), n in prop::array::uniform4(small_q())) {
        let det = |x: &[Q; 4]| &x[0] * &x[3] - &x[1] * &x[2];
        prop_assume!(det(&m) != q(0) && det(&n) != q(0));
        let a = pgl2(&m[0], &m[1], &m[2], &m[3]).unwrap();
        let b = pgl2(&n[0], &n[1], &n[2], &n[3]).unwrap();
        let mn = [
            &m[0] * &n[0] + &m[1] * &n[2],
            &m[0] * &n[1] + &m[1] * &n[3],
            &m[2] * &n[0] + &m[3] * &n[2],
            &m[2] * &n[1] + &m[3] * &n[3],
        ];
        let ab = pgl2(&mn[0], &mn[1], &mn[2], &mn[3]).unwrap();
        prop_assert_eq!(a.compose(&b).unwrap(), ab);
    }

    #[test]
    fn maps_round_trip_through_text(a in catalog_contact_map(), b in klein_map()) {
        for m in [a, b] {
            let text = m.to_string();
            prop_assert_eq!(map(&text), m.clone());
            let hom = m.homogenize().unwrap();
            prop_assert_eq!(map(&hom.to_string()), hom);
        }
    }
}
