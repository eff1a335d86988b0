mod common;

use common::*;
use cremona_contact::algebra::{gcd, MultiPoly, RatFunc};
use cremona_contact::chart::Chart;
use cremona_contact::contact::multiplier;
use cremona_contact::exactness::{
    exactness_test, finite_order_lift, hermite_reduce, lift_form, order_of, sigma_lift, sigma_lift_contact,
    ExactnessResult, LiftResult, Stage,
};
use cremona_contact::families::{lambda_family, monomial_eta, MonomialType};
use cremona_contact::forms::{omega, DiffForm};
use cremona_contact::maps::RationalMap;
use cremona_contact::parse::parse_form;
use cremona_contact::Error;
use proptest::prelude::*;

fn plane_form(s: &str) -> DiffForm {
    parse_form(s, Chart::PLANE01).unwrap()
}

fn d(f: &RatFunc) -> DiffForm {
    DiffForm::function(Chart::PLANE01, f.clone()).unwrap().exterior_derivative().unwrap()
}

fn lifted(l: &LiftResult) -> &RationalMap {
    l.map().expect("lift exists")
}

#[test]
fn hermite_examples() {
    let h = hermite_reduce(&r("1/z1^2"), 1);
    assert_eq!((h.derivative_part, h.remainder), (r("-1/z1"), r("0")));
    let h = hermite_reduce(&r("1/(z1^2 - 1)"), 1);
    assert_eq!((h.derivative_part, h.remainder), (r("0"), r("1/(z1^2 - 1)")));
    let x = r("z0/(z0*z1 + 1)^2");
    let h = hermite_reduce(&x, 0);
    assert_eq!(&h.derivative_part.derive(0) + &h.remainder, x);
}

#[test]
fn exactness_examples() {
    let mono = map("(z0^2*z1, 1/z0)");
    let t = lift_form(&mono, &r("1")).unwrap();
    assert_eq!(exactness_test(&t).unwrap(), ExactnessResult::Exact { b: r("z0*z1") });

    let t = plane_form("z1*dz0 + z0*dz1");
    assert_eq!(exactness_test(&t).unwrap(), ExactnessResult::Exact { b: r("z0*z1") });

    let inv = map("(-z0 + 1/(z1^2 - 1), -z1)");
    let res = exactness_test(&lift_form(&inv, &r("1")).unwrap()).unwrap();
    let (witness, stage) = res.witness().unwrap();
    assert_eq!(stage, Stage::Z1);
    // equal to −1/(z1² − 1) up to the orientation of the form
    assert_eq!(witness, &r("1/(z1^2 - 1)"));
    let flipped = exactness_test(&lift_form(&inv, &r("1")).unwrap().scale(&r("-1"))).unwrap();
    assert_eq!(flipped.witness().unwrap().0, &r("-1/(z1^2 - 1)"));

    assert_eq!(exactness_test(&plane_form("z1*dz0")), Err(Error::NotClosed));
}

#[test]
fn lift_examples() {
    let l = sigma_lift(&map("(z0 + z1, z1)")).unwrap();
    assert_eq!(lifted(&l), &map("(z0 + z1, z1, z2 - z1^2/2)"));
    let l = sigma_lift(&map("(z0, z1)")).unwrap();
    assert!(lifted(&l).is_identity());
    let (plane, lift) = monomial_eta(2, &q(1), MonomialType::First).unwrap();
    assert_eq!(lifted(&sigma_lift(&plane).unwrap()), &lift);
    assert_eq!(lift, map("(z0^2*z1, 1/z0, z2 + z0*z1)"));
    assert!(matches!(sigma_lift(&map("(2*z0, z1)")), Err(Error::NotEtaPreserving(_))));
}

#[test]
fn contact_lift_examples() {
    let (l, _) = sigma_lift_contact(&map("(z1 + z0^2, -z0)")).unwrap();
    assert_eq!(l, map("(z1 + z0^2, -z0, z2 + z0*z1 + z0^3/3)"));
    let (l, _) = sigma_lift_contact(&map("(z0, z1)")).unwrap();
    assert!(l.is_identity());
    // the z1⁵ coefficient is −k/(k+1) for k = 4
    let (l, _) = sigma_lift_contact(&map("(z1, z1^4 - z0)")).unwrap();
    assert_eq!(l, map("(z1, z1^4 - z0, z2 + z0*z1 - 4/5*z1^5)"));
    assert!(matches!(
        sigma_lift_contact(&map("(z0*z1, z1)")),
        Err(Error::NotPolynomialAutomorphism(_))
    ));
}

#[test]
fn finite_order_examples() {
    let l = finite_order_lift(&map("(-z0, -z1)"), 2).unwrap();
    assert_eq!(lifted(&l), &map("(-z0, -z1, z2)"));
    let l = finite_order_lift(&map("(z1, -z0)"), 4).unwrap();
    assert_eq!(lifted(&l), &map("(z1, -z0, z2 + z0*z1)"));
    assert_eq!(order_of(lifted(&l), 8).unwrap(), Some(4));

    // order 2 with a nonzero orbit sum: b + b∘φ = β and the correction is −β/2
    let phi = map("(-z0 + 1, -z1 + 1)");
    let raw = sigma_lift(&phi).unwrap();
    let LiftResult::Lifted { b, .. } = &raw else { panic!() };
    let beta = (b + &phi.pull(b).unwrap()).constant_value().unwrap();
    assert_ne!(beta, q(0));
    let LiftResult::Lifted { b: corrected, .. } = finite_order_lift(&phi, 2).unwrap() else { panic!() };
    assert_eq!(&corrected - b, RatFunc::constant(-beta / q(2)));
}

#[test]
fn lambda_family_is_exact_only_for_monomials() {
    for (a, exact) in [
        ("1", true),
        ("z0", true),
        ("z0^2", true),
        ("3*z0^5", true),
        ("z0 - 1", false),
        ("z0*(z0 - 1)", false),
    ] {
        let phi = lambda_family(&r(a)).unwrap();
        assert_eq!(phi.jacobian_det().unwrap(), r("1"), "{a}");
        let res = sigma_lift(&phi).unwrap();
        assert_eq!(res.map().is_some(), exact, "a = {a}");
        if let Some(l) = res.map() {
            assert_eq!(omega().pullback(l).unwrap(), omega());
        }
    }
}

fn with_log_term() -> impl Strategy<Value = (DiffForm, RatFunc)> {
    (ratfunc_in(XY, 2), poly_in(Z1, 2, 2), nonzero_q()).prop_map(|(f, g, lambda)| {
        // d f + λ d log(z0 + g(z1))
        let den = RatFunc::from_poly(&MultiPoly::var(0) + &g);
        let log = DiffForm::from_terms(
            Chart::PLANE01,
            1,
            vec![(0b01, RatFunc::one()), (0b10, RatFunc::from_poly(g.derive(1)))],
        )
        .unwrap()
        .scale(&(&RatFunc::constant(lambda) / &den));
        (d(&f).add(&log).unwrap(), f)
    })
}

fn stacked_denominator() -> impl Strategy<Value = RatFunc> {
    (poly_in(XY, 3, 3), nonzero_poly_in(XY, 1, 2), nonconstant_poly_in(XY, 1, 2), nonconstant_poly_in(XY, 1, 2))
        .prop_map(|(n, a, b, c)| RatFunc::reduce(n, &(&a * &b.pow(2)) * &c.pow(3)).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hermite_reconstructs(x in stacked_denominator(), var in 0usize..2) {
        let h = hermite_reduce(&x, var);
        prop_assert_eq!(&h.derivative_part.derive(var) + &h.remainder, x);
        let (num, den) = (h.remainder.num(), h.remainder.den());
        prop_assert!(h.remainder.is_zero() || num.degree_in(var) < den.degree_in(var));
        prop_assert!(!gcd(den, &den.derive(var)).uses_var(var));
    }

    #[test]
    fn exact_forms_recover_their_antiderivative(f in ratfunc_in(XY, 2)) {
        let res = exactness_test(&d(&f)).unwrap();
        let b = res.antiderivative().expect("exact");
        prop_assert!((b - &f).is_constant());
        prop_assert_eq!(d(b), d(&f));
    }

    #[test]
    fn a_logarithmic_term_blocks_exactness((theta, _) in with_log_term()) {
        let res = exactness_test(&theta).unwrap();
        let (witness, stage) = res.witness().expect("not exact");
        prop_assert_eq!(stage, Stage::Z0);
        prop_assert!(!witness.is_zero());
        prop_assert!(witness.num().degree_in(0) < witness.den().degree_in(0));
    }

    #[test]
    fn lifts_preserve_omega(phi in exact_plane_map()) {
        let l = sigma_lift(&phi).unwrap();
        let lift = lifted(&l);
        prop_assert_eq!(omega().pullback(lift).unwrap(), omega());
        prop_assert!(multiplier(lift).unwrap().is_one());
    }

    #[test]
    fn lifting_is_a_homomorphism_up_to_translation(phi in exact_plane_map(), psi in exact_plane_map()) {
        let composite = sigma_lift(&phi.compose(&psi).unwrap()).unwrap();
        let product = lifted(&sigma_lift(&phi).unwrap()).compose(lifted(&sigma_lift(&psi).unwrap())).unwrap();
        let lift = lifted(&composite);
        prop_assert_eq!(lift.component(0), product.component(0));
        prop_assert_eq!(lift.component(1), product.component(1));
        prop_assert!((lift.component(2) - product.component(2)).is_constant());
    }

    #[test]
    fn contact_lift_multiplier_is_the_jacobian(phi in polynomial_automorphism()) {
        let (lift, _) = sigma_lift_contact(&phi).unwrap();
        let det = phi.jacobian_det().unwrap();
        prop_assert!(det.is_constant());
        prop_assert_eq!(multiplier(&lift).unwrap(), det);
        prop_assert_eq!(lift.component(0), phi.component(0));
    }

    #[test]
    fn finite_order_lifts_keep_the_order(
        k in 0usize..4,
        p in poly_in(Z1, 2, 2),
        s in poly_in(Z0, 2, 2),
        first in any::<bool>(),
    ) {
        let (linear, order) = [
            (map("(-z0, -z1)"), 2),
            (map("(z1, -z0 - z1)"), 3),
            (map("(z1, -z0)"), 4),
            (map("(z1, -z0 + z1)"), 6),
        ][k].clone();
        // conjugate by an exact shear h
        let (h, hi) = if first {
            let p = RatFunc::from_poly(p);
            (
                RationalMap::new(Chart::PLANE01, vec![&RatFunc::var(0) + &p, RatFunc::var(1)]).unwrap(),
                RationalMap::new(Chart::PLANE01, vec![&RatFunc::var(0) - &p, RatFunc::var(1)]).unwrap(),
            )
        } else {
            let s = RatFunc::from_poly(s);
            (
                RationalMap::new(Chart::PLANE01, vec![RatFunc::var(0), &RatFunc::var(1) + &s]).unwrap(),
                RationalMap::new(Chart::PLANE01, vec![RatFunc::var(0), &RatFunc::var(1) - &s]).unwrap(),
            )
        };
        let phi = h.compose(&linear).unwrap().compose(&hi).unwrap();
        prop_assert_eq!(order_of(&phi, order).unwrap(), Some(order));
        let l = finite_order_lift(&phi, order).unwrap();
        let lift = lifted(&l);
        prop_assert_eq!(order_of(lift, order).unwrap(), Some(order));
        prop_assert!(multiplier(lift).unwrap().is_one());
    }
}
