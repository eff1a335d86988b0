mod common;

use common::*;
use cremona_contact::algebra::{gcd, lcm, squarefree, valuation, MultiPoly, RatFunc, NVARS};
use cremona_contact::parse::{parse_map, parse_ratfunc};
use cremona_contact::chart::PlaneVars;
use proptest::prelude::*;

fn p(s: &str) -> MultiPoly {
    let f = r(s);
    assert!(f.is_polynomial(), "{s}");
    f.num().clone()
}

#[test]
fn gcd_examples() {
    assert_eq!(gcd(&p("z0^2 - z1^2"), &p("z0 - z1")), p("z0 - z1"));
    assert_eq!(gcd(&p("3*z0^2 - 3*z1"), &MultiPoly::zero()), p("z0^2 - z1"));
    assert_eq!(gcd(&p("(z0*z1 + 1)^2"), &p("(z0*z1 + 1)*z0")), p("z0*z1 + 1"));
    assert_eq!(lcm(&p("z0^2 - z1^2"), &p("z0 - z1")), p("z0^2 - z1^2"));
}

#[test]
fn reduce_examples() {
    assert_eq!(r("(z0^2 - z1^2)/(z0 - z1)").to_string(), "z0 + z1");
    assert_eq!(r("z0/1").to_string(), "z0");
    assert_eq!(r("((z0*z1 + 1)*z0)/((z0*z1 + 1)*z2)").to_string(), "z0/z2");
    assert!(RatFunc::reduce(MultiPoly::one(), MultiPoly::zero()).is_err());
}

#[test]
fn squarefree_examples() {
    let d = squarefree(&p("z0^2*z1"), 0).unwrap();
    assert_eq!(d.expand(), p("z0^2*z1"));
    assert!(d.factors.contains(&(p("z0"), 2)));
    let d = squarefree(&p("z1^2 - 1"), 1).unwrap();
    assert_eq!(d.factors, vec![(p("z1^2 - 1"), 1)]);
    let d = squarefree(&p("(z0 + z1)^3*(z0 - z1)"), 0).unwrap();
    assert!(d.factors.contains(&(p("z0 + z1"), 3)));
    assert!(d.factors.contains(&(p("z0 - z1"), 1)));
    assert!(squarefree(&MultiPoly::zero(), 0).is_err());
}

#[test]
fn derivative_and_substitution_examples() {
    assert_eq!(r("z0^2*z1").derive(0), r("2*z0*z1"));
    assert_eq!(r("z2/(1 + z2)").derive(2), r("1/(1 + z2)^2"));
    assert!(r("z0").derive(1).is_zero());
    let mut a: [Option<RatFunc>; NVARS] = Default::default();
    a[0] = Some(r("1/z1"));
    assert_eq!(r("z0*z1").substitute(&a).unwrap(), r("1"));
    let mut a: [Option<RatFunc>; NVARS] = Default::default();
    a[1] = Some(r("z2"));
    a[2] = Some(r("(z2 + 1)/z1"));
    assert_eq!(r("(z2 + 1)/z1").substitute(&a).unwrap().to_string(), "(z1 + z2 + 1)/(z1*z2)");
    let mut a: [Option<RatFunc>; NVARS] = Default::default();
    a[0] = Some(r("z1"));
    a[1] = Some(r("z1"));
    assert!(r("1/(z0 - z1)").substitute(&a).is_err());
}

#[test]
fn valuation_examples() {
    assert_eq!(valuation(&r("z1*z2^3/(z2 - 2*z0*z1)"), &p("z2")).unwrap(), 3);
    assert_eq!(valuation(&r("1/z0"), &p("z0")).unwrap(), -1);
    assert_eq!(valuation(&r("z0^2 - z1^2"), &p("z0 - z1")).unwrap(), 1);
    assert!(valuation(&r("z0"), &p("3")).is_err());
}

#[test]
fn printing_examples() {
    assert_eq!(r("z1*z0^2").to_string(), "z0^2*z1");
    assert_eq!(r("-z1/2").to_string(), "-1/2*z1");
    assert_eq!(r("(z0 + z1)/(z0 - z1)").to_string(), "(z0 + z1)/(z0 - z1)");
    assert_eq!(r("(z0 + z1)/(z1 - z0)").to_string(), "(-z0 - z1)/(z0 - z1)");
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gcd_is_multiplicative(a in poly_in(XYZ, 2, 3), b in poly_in(XYZ, 2, 3), c in nonzero_poly_in(XYZ, 2, 2)) {
        let lhs = gcd(&(&a * &c), &(&b * &c));
        let rhs = &gcd(&a, &b) * &c;
        prop_assert_eq!(lhs.canonical_associate(), rhs.canonical_associate());
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly_in(XYZ, 3, 3), b in nonzero_poly_in(XYZ, 3, 3)) {
        let g = gcd(&a, &b);
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
    }

    #[test]
    fn ratfunc_equality_is_cross_multiplication(
        a in poly_in(XYZ, 2, 3), b in nonzero_poly_in(XYZ, 2, 3),
        c in poly_in(XYZ, 2, 3), d in nonzero_poly_in(XYZ, 2, 3),
        k in nonzero_poly_in(XYZ, 1, 2), same in any::<bool>(),
    ) {
        let (c, d) = if same { (&a * &k, &b * &k) } else { (c, d) };
        let x = RatFunc::reduce(a.clone(), b.clone()).unwrap();
        let y = RatFunc::reduce(c.clone(), d.clone()).unwrap();
        prop_assert_eq!(x == y, &a * &d == &c * &b);
        let again = RatFunc::reduce(x.num().clone(), x.den().clone()).unwrap();
        prop_assert_eq!(&again, &x);
    }

    #[test]
    fn canonical_serialization_ignores_construction_order(a in poly_in(XYZ, 3, 4), b in poly_in(XYZ, 3, 4)) {
        prop_assert_eq!((&a + &b).to_string(), (&b + &a).to_string());
        prop_assert_eq!((&a * &b).to_string(), (&b * &a).to_string());
    }

    #[test]
    fn squarefree_reconstructs(f in nonconstant_poly_in(XY, 2, 2), g in nonzero_poly_in(XY, 2, 2), h in nonzero_poly_in(XY, 1, 2)) {
        let input = &(&f.pow(2) * &g) * &h.pow(3);
        for var in [0, 1] {
            let d = squarefree(&input, var).unwrap();
            prop_assert_eq!(d.expand(), input.clone());
            for (i, (a, _)) in d.factors.iter().enumerate() {
                // squarefree up to content, which is free of `var`
                prop_assert!(!gcd(a, &a.derive(var)).uses_var(var));
                for (b, _) in &d.factors[i + 1..] {
                    prop_assert!(gcd(a, b).is_constant());
                }
            }
        }
    }

    #[test]
    fn derivative_matches_the_quotient_rule(
        n in poly_in(XYZ, 3, 3),
        a in nonconstant_poly_in(XYZ, 1, 2),
        b in nonconstant_poly_in(XYZ, 1, 2),
        v in 0usize..3,
    ) {
        // repeated factors, some of them possibly free of v
        let den = &a.pow(2) * &b.pow(3);
        let f = RatFunc::reduce(n, den).unwrap();
        let (num, den) = (f.num(), f.den());
        let top = &(&num.derive(v) * den) - &(num * &den.derive(v));
        let expected = RatFunc::reduce(top, den * den).unwrap();
        prop_assert_eq!(f.derive(v), expected);
    }

    #[test]
    fn leibniz_rule(a in ratfunc_in(XYZ, 2), b in ratfunc_in(XYZ, 2), v in 0usize..3) {
        let lhs = (&a * &b).derive(v);
        let rhs = &(&a.derive(v) * &b) + &(&a * &b.derive(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule(f in ratfunc_in(XYZ, 2), g0 in poly_in(XYZ, 2, 2), g1 in poly_in(XYZ, 2, 2), g2 in ratfunc_in(XYZ, 1), v in 0usize..3) {
        let g = [RatFunc::from_poly(g0), RatFunc::from_poly(g1), g2];
        let mut a: [Option<RatFunc>; NVARS] = Default::default();
        for i in 0..3 {
            a[i] = Some(g[i].clone());
        }
        let Ok(composed) = f.substitute(&a) else { return Ok(()) };
        let mut expected = RatFunc::zero();
        for i in 0..3 {
            let Ok(outer) = f.derive(i).substitute(&a) else { return Ok(()) };
            expected = &expected + &(&outer * &g[i].derive(v));
        }
        prop_assert_eq!(composed.derive(v), expected);
    }

    #[test]
    fn valuation_is_additive(a in nonzero_ratfunc_in(XYZ, 2), b in nonzero_ratfunc_in(XYZ, 2), k in 0usize..3, e in 0u32..3) {
        let f = [p("z2"), p("z0 - z1"), p("z0*z1 + 1")][k].clone();
        let boost = RatFunc::from_poly(f.pow(e));
        let a = &a * &boost;
        let va = valuation(&a, &f).unwrap();
        let vb = valuation(&b, &f).unwrap();
        prop_assert_eq!(valuation(&(&a * &b), &f).unwrap(), va + vb);
        prop_assert!(va >= e as i64 || valuation(&(&a / &boost), &f).unwrap() < 0);
    }

    #[test]
    fn ratfunc_round_trips_through_text(a in ratfunc_in(XYZ, 3)) {
        prop_assert_eq!(parse_ratfunc(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn maps_round_trip_through_text(a in nonzero_ratfunc_in(XYZ, 2), b in nonzero_ratfunc_in(XYZ, 2), c in nonzero_ratfunc_in(XYZ, 2)) {
        let m = cremona_contact::maps::RationalMap::new(cremona_contact::chart::Chart::AFFINE, vec![a, b, c]).unwrap();
        prop_assert_eq!(parse_map(&m.to_string(), PlaneVars::Z0Z1).unwrap(), m);
    }
}
