mod common;

use common::*;
use cremona_contact::algebra::RatFunc;
use cremona_contact::chart::Chart;
use cremona_contact::contact::{multiplier, z_field};
use cremona_contact::families::legendre_involution;
use cremona_contact::forms::{omega, omega_bar, omega_in_chart, DiffForm, VectorField};
use cremona_contact::maps::RationalMap;
use cremona_contact::parse::parse_form;
use cremona_contact::Error;
use proptest::prelude::*;

fn form(s: &str) -> DiffForm {
    parse_form(s, Chart::AFFINE).unwrap()
}

fn one_form() -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(ratfunc_in(XYZ, 2), 3).prop_map(|cs| {
        let terms = cs.into_iter().enumerate().map(|(i, c)| (1u8 << i, c)).collect();
        DiffForm::from_terms(Chart::AFFINE, 1, terms).unwrap()
    })
}

fn poly_one_form() -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(poly_in(XYZ, 2, 2), 3).prop_map(|cs| {
        let terms = cs.into_iter().enumerate().map(|(i, c)| (1u8 << i, RatFunc::from_poly(c))).collect();
        DiffForm::from_terms(Chart::AFFINE, 1, terms).unwrap()
    })
}

#[test]
fn exterior_derivative_examples() {
    assert_eq!(omega().exterior_derivative().unwrap().to_string(), "dz0^dz1");
    assert_eq!(form("z0*z1*dz1").exterior_derivative().unwrap(), form("z1*dz0^dz1"));
    let top = form("dz0^dz1^dz2");
    assert_eq!(top.exterior_derivative(), Err(Error::DegreeOverflow));
}

#[test]
fn wedge_examples() {
    let w = omega();
    let dw = w.exterior_derivative().unwrap();
    assert_eq!(w.wedge(&dw).unwrap().to_string(), "dz0^dz1^dz2");
    let dz0 = DiffForm::dz(Chart::AFFINE, 0).unwrap();
    assert!(dz0.wedge(&dz0).unwrap().is_zero());
    assert_eq!(dw.wedge(&dw), Err(Error::DegreeOverflow));

    let wb = omega_bar();
    let top = wb.wedge(&wb.exterior_derivative().unwrap()).unwrap();
    let on_chart = top.restrict_to_chart(2).unwrap();
    assert_eq!(on_chart, parse_form("-z3^2*dz0^dz1^dz3", on_chart.chart()).unwrap());
}

#[test]
fn pullback_examples() {
    let w = omega();
    assert_eq!(w.pullback(&legendre_involution()).unwrap(), w.scale(&r("-1")));
    assert_eq!(w.pullback(&RationalMap::identity(Chart::AFFINE)).unwrap(), w);
    let sansfib = map("(z0/(1 + z2)^2, z1, z2/(1 + z2))");
    assert_eq!(w.pullback(&sansfib).unwrap(), w.scale(&r("1/(1 + z2)^2")));
    let plane = map("(z1, z0)");
    assert!(matches!(w.pullback(&plane), Err(Error::Arity(_))));
}

#[test]
fn contraction_examples() {
    assert_eq!(omega().contract(&VectorField::reeb()).unwrap(), r("1"));
    let dz0 = DiffForm::dz(Chart::AFFINE, 0).unwrap();
    assert!(dz0.contract(&VectorField::coordinate(Chart::AFFINE, 1).unwrap()).unwrap().is_zero());
    for name in ["legendre:lyness", "legendre:henon", "alpha:quadratic", "nfamily:2"] {
        let phi = cremona_contact::catalog::lookup(name).unwrap().map;
        let z = z_field(&phi).unwrap();
        assert!(omega().contract(&z).unwrap().is_zero(), "{name}");
    }
}

#[test]
fn omega_on_other_charts_is_contact() {
    for k in 0..3 {
        let w = omega_in_chart(k).unwrap();
        let top = w.wedge(&w.exterior_derivative().unwrap()).unwrap();
        assert!(!top.is_zero(), "chart z{k}");
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_is_zero(f in ratfunc_in(XYZ, 2), a in one_form()) {
        let df = DiffForm::function(Chart::AFFINE, f).unwrap().exterior_derivative().unwrap();
        prop_assert!(df.exterior_derivative().unwrap().is_zero());
        prop_assert!(a.exterior_derivative().unwrap().exterior_derivative().unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_antisymmetric(a in one_form(), b in one_form()) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn leibniz_for_forms(a in poly_one_form(), b in poly_one_form()) {
        // d(a ∧ b) = da ∧ b − a ∧ db for 1-forms
        let lhs = a.wedge(&b).unwrap().exterior_derivative().unwrap();
        let da_b = a.exterior_derivative().unwrap().wedge(&b).unwrap();
        let a_db = a.wedge(&b.exterior_derivative().unwrap()).unwrap();
        prop_assert_eq!(lhs, da_b.sub(&a_db).unwrap());
    }

    #[test]
    fn pullback_is_functorial(phi in light_contact_map(), psi in light_contact_map(), a in poly_one_form()) {
        let composite = phi.compose(&psi).unwrap();
        let lhs = a.pullback(&composite).unwrap();
        let rhs = a.pullback(&phi).unwrap().pullback(&psi).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_respects_wedge(phi in light_contact_map(), a in poly_one_form(), b in poly_one_form()) {
        let lhs = a.wedge(&b).unwrap().pullback(&phi).unwrap();
        let rhs = a.pullback(&phi).unwrap().wedge(&b.pullback(&phi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_d(phi in light_contact_map(), a in poly_one_form()) {
        let lhs = a.exterior_derivative().unwrap().pullback(&phi).unwrap();
        let rhs = a.pullback(&phi).unwrap().exterior_derivative().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contact_volume_scales_by_v_squared(phi in catalog_contact_map()) {
        let w = omega();
        let vol = w.wedge(&w.exterior_derivative().unwrap()).unwrap();
        let v = multiplier(&phi).unwrap();
        prop_assert_eq!(vol.pullback(&phi).unwrap(), vol.scale(&(&v * &v)));
    }

    #[test]
    fn forms_round_trip_through_text(a in one_form(), b in poly_one_form()) {
        // the zero form prints as "0", which carries no degree
        prop_assume!(!a.is_zero());
        prop_assert_eq!(parse_form(&a.to_string(), Chart::AFFINE).unwrap(), a.clone());
        let ab = a.wedge(&b).unwrap();
        if !ab.is_zero() {
            prop_assert_eq!(parse_form(&ab.to_string(), Chart::AFFINE).unwrap(), ab);
        }
    }
}
