//! Contact test, the multiplier `V`, the invariant `α` and friends.

use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::algebra::{valuation, MultiPoly, RatFunc, Q};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::{omega, omega_bar, omega_in_chart, DiffForm, VectorField};
use crate::maps::{HInftyAction, HInftyKind, RationalMap};

/// Value of `α`, with `Infinity` on the Klein family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alpha {
    Finite(RatFunc),
    Infinity,
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(r) => write!(f, "{r}"),
            Alpha::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactReport {
    pub is_contact: bool,
    pub v: Option<RatFunc>,
    pub alpha: Option<Alpha>,
    pub preserves_omega: bool,
    pub det_jac_square_check: bool,
    pub jacobian_det: RatFunc,
}

fn require_affine(phi: &RationalMap) -> Result<()> {
    if phi.chart() != Chart::AFFINE {
        return Err(Error::Arity(format!(
            "expected a map of the standard affine chart, found chart {}",
            phi.chart()
        )));
    }
    Ok(())
}

/// `V` read off the `dz2` equation: `φ0 ∂φ1/∂z2 + ∂φ2/∂z2`.
fn v_from_third_equation(phi: &RationalMap) -> RatFunc {
    let [p0, p1, p2] = [phi.component(0), phi.component(1), phi.component(2)];
    &(p0 * &p1.derive(2)) + &p2.derive(2)
}

/// Full contact analysis of a map of the standard chart.
pub fn analyze(phi: &RationalMap) -> Result<ContactReport> {
    require_affine(phi)?;
    let jac = phi.jacobian_det()?;
    if jac.is_zero() {
        return Err(Error::NonDominant);
    }
    let w = omega();
    let pulled = w.pullback(phi)?;
    let is_contact = pulled.wedge(&w)?.is_zero();
    if !is_contact {
        return Ok(ContactReport {
            is_contact,
            v: None,
            alpha: None,
            preserves_omega: false,
            det_jac_square_check: false,
            jacobian_det: jac,
        });
    }
    let v = v_from_third_equation(phi);
    if pulled != w.scale(&v) {
        return Err(Error::InconsistentPde(format!(
            "pullback {pulled} is not V*omega for V = {v}"
        )));
    }
    let alpha = alpha_unchecked(phi)?;
    Ok(ContactReport {
        is_contact,
        preserves_omega: v.is_one(),
        det_jac_square_check: jac == &v * &v,
        v: Some(v),
        alpha: Some(alpha),
        jacobian_det: jac,
    })
}

/// `V(φ)`, or `NotContact`.
pub fn multiplier(phi: &RationalMap) -> Result<RatFunc> {
    analyze(phi)?.v.ok_or(Error::NotContact)
}

/// Multiplier of `φ*ω_k = V ω_k` where `ω_k` is the contact form written on
/// the chart of `φ` (any chart `z_k = 1`).
pub fn chart_multiplier(phi: &RationalMap) -> Result<RatFunc> {
    let Chart::Affine(k) = phi.chart() else {
        return Err(Error::Arity("chart multiplier needs a 3-dimensional chart".into()));
    };
    let w = omega_in_chart(k as usize)?;
    proportionality(&w.pullback(phi)?, &w)?.ok_or(Error::NotContact)
}

/// `Some(c)` when `a = c * b`.
fn proportionality(a: &DiffForm, b: &DiffForm) -> Result<Option<RatFunc>> {
    let Some((idx, cb)) = b.terms().into_iter().next() else {
        return Err(Error::ZeroPolynomial);
    };
    let c = a.coefficient(&idx).checked_div(&cb)?;
    Ok((*a == b.scale(&c)).then_some(c))
}

fn alpha_unchecked(phi: &RationalMap) -> Result<Alpha> {
    let (p1, p2) = (phi.component(1), phi.component(2));
    if !p1.uses_var(0) && !p2.uses_var(0) {
        return Ok(Alpha::Infinity);
    }
    let z0 = RatFunc::var(0);
    let ratio = |p: &RatFunc| -> Result<Option<RatFunc>> {
        let d0 = p.derive(0);
        if d0.is_zero() {
            return Ok(None);
        }
        (&p.derive(1) - &(&z0 * &p.derive(2))).checked_div(&d0).map(Some)
    };
    match (ratio(p1)?, ratio(p2)?) {
        (Some(a), Some(b)) if a != b => Err(Error::InconsistentPde(format!(
            "alpha from the second component is {a}, from the third {b}"
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(Alpha::Finite(a)),
        (None, None) => Ok(Alpha::Infinity),
    }
}

/// `α(φ)`.
pub fn alpha_of(phi: &RationalMap) -> Result<Alpha> {
    analyze(phi)?.alpha.ok_or(Error::NotContact)
}

/// `Z_φ = α ∂/∂z0 − ∂/∂z1 + z0 ∂/∂z2`, checked to kill `φ1` and `φ2`.
pub fn z_field(phi: &RationalMap) -> Result<VectorField> {
    let Alpha::Finite(a) = alpha_of(phi)? else {
        return Err(Error::KleinFamily);
    };
    let z = VectorField::new(Chart::AFFINE, vec![a, RatFunc::from_int(-1), RatFunc::var(0)])?;
    for i in 1..3 {
        let r = z.apply(phi.component(i))?;
        if !r.is_zero() {
            return Err(Error::InconsistentPde(format!("Z_phi does not annihilate component {i}: {r}")));
        }
    }
    Ok(z)
}

/// Whether `V(φ) = U / (U∘φ)`.
pub fn invariant_multiplier_check(phi: &RationalMap, u: &RatFunc) -> Result<bool> {
    if u.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let v = multiplier(phi)?;
    let pulled = phi.pull(u)?;
    Ok(v == u.checked_div(&pulled)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub hinfty: HInftyAction,
    /// Homogeneous multiplier with `φ̄*ω̄ = V̄ ω̄`.
    pub vbar: RatFunc,
    pub vbar_vanishes_on_hinfty: bool,
    pub regular: bool,
}

/// Regularity at infinity, decided by the behaviour of `H∞` and of `V̄` on it.
pub fn regular_at_infinity<R: Rng>(phi: &RationalMap, rng: &mut R) -> Result<RegularityVerdict> {
    multiplier(phi)?;
    let hom = phi.homogenize()?;
    let wb = omega_bar();
    let vbar = proportionality(&wb.pullback(&hom)?, &wb)?.ok_or_else(|| {
        Error::InconsistentPde("homogenized map does not rescale the homogeneous contact form".into())
    })?;
    let vbar_vanishes_on_hinfty = valuation(&vbar, &MultiPoly::var(3))? > 0;
    let hinfty = hom.hinfty_action(rng)?;
    let keeps_hinfty = match hinfty.kind {
        HInftyKind::Preserved => true,
        HInftyKind::ContractedToPoint(_) | HInftyKind::ContractedToCurve => hinfty.into_hinfty,
        HInftyKind::Moved => return Err(Error::HInftyMoved),
    };
    Ok(RegularityVerdict {
        regular: keeps_hinfty && !vbar_vanishes_on_hinfty,
        hinfty,
        vbar,
        vbar_vanishes_on_hinfty,
    })
}

/// Order of vanishing of `V(φ)` along `f = 0`, floored at zero.
pub fn contraction_multiplicity(phi: &RationalMap, f: &MultiPoly) -> Result<u32> {
    let v = multiplier(phi)?;
    Ok(valuation(&v, f)?.max(0) as u32)
}

/// Whether `V(φ∘ψ) = (V(φ)∘ψ) V(ψ)`.
pub fn cocycle_check(phi: &RationalMap, psi: &RationalMap) -> Result<bool> {
    let lhs = multiplier(&phi.compose(psi)?)?;
    let rhs = &psi.pull(&multiplier(phi)?)? * &multiplier(psi)?;
    Ok(lhs == rhs)
}

/// Whether `φ = (φ0(z0,z1), φ1(z0,z1), z2 + b(z0,z1))`.
pub fn has_omega_preserving_shape(phi: &RationalMap) -> bool {
    let shift = phi.component(2) - &RatFunc::var(2);
    phi.chart() == Chart::AFFINE
        && !phi.component(0).uses_var(2)
        && !phi.component(1).uses_var(2)
        && !shift.uses_var(2)
}

/// Writes a contact map with constant multiplier `λ` as
/// `(λz0, z1, λz2)∘φ̃` with `φ̃*ω = ω`. `None` if `V` is not constant.
pub fn split_scaling(phi: &RationalMap) -> Result<Option<(Q, RationalMap)>> {
    let v = multiplier(phi)?;
    let Some(lambda) = v.constant_value() else {
        return Ok(None);
    };
    if lambda.is_zero() {
        return Err(Error::NonDominant);
    }
    let inv = RatFunc::constant(lambda.recip());
    let tilde = RationalMap::new(
        Chart::AFFINE,
        vec![phi.component(0) * &inv, phi.component(1).clone(), phi.component(2) * &inv],
    )?;
    if !multiplier(&tilde)?.is_one() {
        return Err(Error::InconsistentPde("rescaled map does not preserve omega".into()));
    }
    Ok(Some((lambda, tilde)))
}

/// The scaling `(λz0, z1, λz2)`.
pub fn scaling_map(lambda: &Q) -> RationalMap {
    let l = RatFunc::constant(lambda.clone());
    RationalMap::new(
        Chart::AFFINE,
        vec![&l * &RatFunc::var(0), RatFunc::var(1), &l * &RatFunc::var(2)],
    )
    .expect("valid map")
}
