//! Exactness of closed rational 1-forms in `(z0, z1)` and the lifts built
//! from their antiderivatives.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{content_in, gcd, MultiPoly, RatFunc, UPoly, Q};
use crate::chart::{Chart, PlaneVars};
use crate::contact::multiplier;
use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::maps::RationalMap;

/// `input = ∂(derivative_part)/∂var + remainder`, the remainder proper with
/// squarefree denominator in `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteSplit {
    pub derivative_part: RatFunc,
    pub remainder: RatFunc,
}

fn upoly(p: &MultiPoly, var: usize) -> UPoly {
    UPoly::from_poly(p, var)
}

fn exact(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a.div_exact(b).expect("exact division in Hermite reduction")
}

/// Hermite reduction of `r` as a univariate function of `var` over the field
/// of rational functions in the other variables.
pub fn hermite_reduce(r: &RatFunc, var: usize) -> HermiteSplit {
    // content free of `var` is a unit here; move it to the numerator
    let content = content_in(r.den(), var);
    let d = &exact(r.den(), &content);
    let unit = RatFunc::from_poly(content).recip().expect("nonzero content");
    let (q, a) = upoly(r.num(), var).div_rem(&upoly(d, var));
    let (q, mut a) = (q.scale(&unit), a.scale(&unit));
    let mut g = RatFunc::zero();
    let mut d_minus = gcd(d, &d.derive(var));
    let d_star = exact(d, &d_minus);
    while d_minus.degree_in(var) > 0 {
        let d_minus2 = gcd(&d_minus, &d_minus.derive(var));
        let d_minus_star = exact(&d_minus, &d_minus2);
        let coef = -exact(&(&d_star * &d_minus.derive(var)), &d_minus);
        let (b, c) = UPoly::solve_bezout(&upoly(&coef, var), &upoly(&d_minus_star, var), &a);
        a = c.sub(&b.derive().mul(&upoly(&exact(&d_star, &d_minus_star), var)));
        let piece = b
            .to_ratfunc()
            .checked_div(&RatFunc::from_poly(d_minus.clone()))
            .expect("nonzero denominator");
        g = &g + &piece;
        d_minus = d_minus2;
    }
    let remainder = a
        .to_ratfunc()
        .checked_div(&RatFunc::from_poly(d_star))
        .expect("nonzero denominator");
    HermiteSplit {
        derivative_part: &g + &q.integrate().to_ratfunc(),
        remainder,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Z0,
    Z1,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Z0 => "z0",
            Stage::Z1 => "z1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessResult {
    Exact { b: RatFunc },
    NotExact { witness: RatFunc, stage: Stage },
}

impl ExactnessResult {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactnessResult::Exact { .. })
    }

    pub fn antiderivative(&self) -> Option<&RatFunc> {
        match self {
            ExactnessResult::Exact { b } => Some(b),
            ExactnessResult::NotExact { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<(&RatFunc, Stage)> {
        match self {
            ExactnessResult::Exact { .. } => None,
            ExactnessResult::NotExact { witness, stage } => Some((witness, *stage)),
        }
    }
}

/// Decides whether a closed 1-form `A dz0 + B dz1` is `db` for a rational `b`.
pub fn exactness_test(theta: &DiffForm) -> Result<ExactnessResult> {
    if theta.degree() != 1 {
        return Err(Error::Arity("exactness needs a 1-form".into()));
    }
    let theta = if theta.chart() == Chart::PLANE01 {
        theta.clone()
    } else {
        theta.retag(Chart::PLANE01)?
    };
    let a = theta.coefficient(&[0]);
    let b = theta.coefficient(&[1]);
    if a.derive(1) != b.derive(0) {
        return Err(Error::NotClosed);
    }
    let first = hermite_reduce(&a, 0);
    if !first.remainder.is_zero() {
        return Ok(ExactnessResult::NotExact {
            witness: first.remainder,
            stage: Stage::Z0,
        });
    }
    let b0 = first.derivative_part;
    let c = &b - &b0.derive(1);
    if c.uses_var(0) {
        return Err(Error::InconsistentPde(format!("leftover dz1 coefficient {c} depends on z0")));
    }
    let second = hermite_reduce(&c, 1);
    if !second.remainder.is_zero() {
        return Ok(ExactnessResult::NotExact {
            witness: second.remainder,
            stage: Stage::Z1,
        });
    }
    let mut total = &b0 + &second.derivative_part;
    if let Ok(c0) = total.eval(&[Q::zero(), Q::zero(), Q::zero(), Q::zero()]) {
        total = &total - &RatFunc::constant(c0);
    }
    let check = DiffForm::function(Chart::PLANE01, total.clone())?.exterior_derivative()?;
    if check != theta {
        return Err(Error::InconsistentPde(format!("d({total}) differs from the input form")));
    }
    Ok(ExactnessResult::Exact { b: total })
}

/// A plane map moved to the `(z0, z1)` variables.
fn plane01(phi: &RationalMap) -> Result<RationalMap> {
    match phi.chart() {
        Chart::Plane(_) => phi.to_plane_vars(PlaneVars::Z0Z1),
        other => Err(Error::Arity(format!("expected a plane map, found chart {other}"))),
    }
}

/// `c z0 dz1 − φ0 dφ1`.
pub fn lift_form(phi: &RationalMap, c: &RatFunc) -> Result<DiffForm> {
    let phi = plane01(phi)?;
    let z0dz1 = DiffForm::from_terms(Chart::PLANE01, 1, vec![(0b10, c * &RatFunc::var(0))])?;
    let dphi1 = DiffForm::function(Chart::PLANE01, phi.component(1).clone())?.exterior_derivative()?;
    z0dz1.sub(&dphi1.scale(phi.component(0)))
}

/// Result of a lift attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftResult {
    Lifted { map: RationalMap, b: RatFunc },
    Obstructed { witness: RatFunc, stage: Stage },
}

impl LiftResult {
    pub fn map(&self) -> Option<&RationalMap> {
        match self {
            LiftResult::Lifted { map, .. } => Some(map),
            LiftResult::Obstructed { .. } => None,
        }
    }
}

fn assemble(phi: &RationalMap, third: RatFunc) -> Result<RationalMap> {
    RationalMap::new(
        Chart::AFFINE,
        vec![phi.component(0).clone(), phi.component(1).clone(), third],
    )
}

/// The `ω`-preserving lift `(φ0, φ1, z2 + b)` of an area-preserving plane map.
pub fn sigma_lift(phi: &RationalMap) -> Result<LiftResult> {
    let phi = plane01(phi)?;
    let det = phi.jacobian_det()?;
    if !det.is_one() {
        return Err(Error::NotEtaPreserving(format!("jacobian determinant is {det}")));
    }
    match exactness_test(&lift_form(&phi, &RatFunc::one())?)? {
        ExactnessResult::NotExact { witness, stage } => Ok(LiftResult::Obstructed { witness, stage }),
        ExactnessResult::Exact { b } => {
            let map = assemble(&phi, &RatFunc::var(2) + &b)?;
            if !multiplier(&map)?.is_one() {
                return Err(Error::InconsistentPde(format!("lift {map} does not preserve omega")));
            }
            Ok(LiftResult::Lifted { map, b })
        }
    }
}

/// The contact lift `(φ0, φ1, c z2 + b)` of a plane polynomial automorphism
/// with constant jacobian `c`.
pub fn sigma_lift_contact(phi: &RationalMap) -> Result<(RationalMap, RatFunc)> {
    let phi = plane01(phi)?;
    if !phi.is_polynomial() {
        return Err(Error::NotPolynomialAutomorphism("components are not polynomials".into()));
    }
    let det = phi.jacobian_det()?;
    if !det.is_constant() || det.is_zero() {
        return Err(Error::NotPolynomialAutomorphism(format!("jacobian determinant is {det}")));
    }
    let b = match exactness_test(&lift_form(&phi, &det)?)? {
        ExactnessResult::Exact { b } => b,
        ExactnessResult::NotExact { witness, .. } => {
            return Err(Error::InconsistentPde(format!(
                "polynomial closed form left a logarithmic part {witness}"
            )))
        }
    };
    let map = assemble(&phi, &(&det * &RatFunc::var(2)) + &b)?;
    if multiplier(&map)? != det {
        return Err(Error::InconsistentPde(format!("lift {map} has the wrong multiplier")));
    }
    Ok((map, b))
}

/// Smallest `k ≥ 1` with `φ^k = id`, searching up to `bound`.
pub fn order_of(phi: &RationalMap, bound: usize) -> Result<Option<usize>> {
    let mut it = phi.clone();
    for k in 1..=bound {
        if it.is_identity() {
            return Ok(Some(k));
        }
        if k < bound {
            it = it.compose(phi)?;
        }
    }
    Ok(None)
}

/// Lift of a plane map of exact order `ℓ` that again has order `ℓ`.
pub fn finite_order_lift(phi: &RationalMap, order: usize) -> Result<LiftResult> {
    let phi = plane01(phi)?;
    if order == 0 || order_of(&phi, order)? != Some(order) {
        return Err(Error::NotPeriodic(format!("{phi} does not have order {order}")));
    }
    let (lift, b) = match sigma_lift(&phi)? {
        LiftResult::Lifted { map, b } => (map, b),
        obstructed => return Ok(obstructed),
    };
    let mut orbit_sum = RatFunc::zero();
    let mut it = RationalMap::identity(Chart::PLANE01);
    for _ in 0..order {
        orbit_sum = &orbit_sum + &it.pull(&b)?;
        it = it.compose(&phi)?;
    }
    let Some(beta) = orbit_sum.constant_value() else {
        return Err(Error::Internal(format!("orbit sum {orbit_sum} of b is not constant")));
    };
    let gamma = RatFunc::constant(-beta / Q::from_integer((order as i64).into()));
    let b = &b + &gamma;
    let map = assemble(&lift, lift.component(2) + &gamma)?;
    if order_of(&map, order)? != Some(order) {
        return Err(Error::Internal(format!("corrected lift {map} does not have order {order}")));
    }
    Ok(LiftResult::Lifted { map, b })
}
