//! Constructors for the named maps and parameter families.

use num_traits::Zero;

use crate::algebra::{MultiPoly, RatFunc, NVARS, Q};
use crate::chart::{Chart, PlaneVars};
use crate::contact::multiplier;
use crate::error::{Error, Result};
use crate::maps::RationalMap;

fn z(i: usize) -> RatFunc {
    RatFunc::var(i)
}

fn c(q: &Q) -> RatFunc {
    RatFunc::constant(q.clone())
}

fn plane12(phi: &RationalMap) -> Result<RationalMap> {
    match phi.chart() {
        Chart::Plane(_) => phi.to_plane_vars(PlaneVars::Z1Z2),
        other => Err(Error::Arity(format!("expected a plane map, found chart {other}"))),
    }
}

/// The Klein embedding `𝒦` of a plane map in `(z1, z2)`.
pub fn klein_embed(phi: &RationalMap) -> Result<RationalMap> {
    let phi = plane12(phi)?;
    let (p1, p2) = (phi.component(0), phi.component(1));
    let num = &(-p2.derive(1)) + &(&z(0) * &p2.derive(2));
    let den = &p1.derive(1) - &(&z(0) * &p1.derive(2));
    if den.is_zero() {
        return Err(Error::DegenerateEmbedding(format!("{phi} has a degenerate first component")));
    }
    let first = num.checked_div(&den)?;
    RationalMap::new(Chart::AFFINE, vec![first, p1.clone(), p2.clone()])
}

/// `ℒ = (z1, z0, −z2 − z0 z1)`.
pub fn legendre_involution() -> RationalMap {
    RationalMap::new(Chart::AFFINE, vec![z(1), z(0), &(-z(2)) - &(&z(0) * &z(1))])
        .expect("valid map")
        .with_name("legendre")
}

/// Legendre-family member: the plane map evaluated at `(z0, −(z2 + z0 z1))`
/// with the first component fixed by the contact equations.
pub fn legendre_family(phi: &RationalMap) -> Result<RationalMap> {
    let Chart::Plane(vars) = phi.chart() else {
        return Err(Error::Arity(format!("expected a plane map, found chart {}", phi.chart())));
    };
    let (a, b) = match vars {
        PlaneVars::Z0Z1 => (0, 1),
        PlaneVars::Z1Z2 => (1, 2),
    };
    let mut s: [Option<RatFunc>; NVARS] = Default::default();
    s[a] = Some(z(0));
    s[b] = Some(-(&z(2) + &(&z(0) * &z(1))));
    let c1 = phi.component(0).substitute(&s)?;
    let c2 = phi.component(1).substitute(&s)?;
    let den = c1.derive(0);
    if den.is_zero() {
        return Err(Error::DegenerateEmbedding(format!("{phi} has a degenerate first component")));
    }
    let first = -c2.derive(0).checked_div(&den)?;
    RationalMap::new(Chart::AFFINE, vec![first, c1, c2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialType {
    /// `(γ z0^p z1^(p−1), γ⁻¹ z0^(1−p) z1^(2−p))`
    First,
    /// `(γ z0^p z1^(p+1), −γ⁻¹ z0^(1−p) z1^(−p))`
    Second,
}

fn mono(c0: &Q, e0: i64, e1: i64) -> RatFunc {
    use crate::algebra::var_power;
    &(&c(c0) * &var_power(0, e0)) * &var_power(1, e1)
}

/// Area-preserving monomial map and its `ω`-preserving lift.
pub fn monomial_eta(p: i64, gamma: &Q, kind: MonomialType) -> Result<(RationalMap, RationalMap)> {
    if gamma.is_zero() {
        return Err(Error::ZeroScale);
    }
    let inv = gamma.recip();
    let (f0, f1, k) = match kind {
        MonomialType::First => (mono(gamma, p, p - 1), mono(&inv, 1 - p, 2 - p), p - 1),
        MonomialType::Second => (mono(gamma, p, p + 1), mono(&-inv, 1 - p, -p), 1 - p),
    };
    let plane = RationalMap::new(Chart::PLANE01, vec![f0.clone(), f1.clone()])?;
    let b = &RatFunc::from_int(k) * &(&z(0) * &z(1));
    let lift = RationalMap::new(Chart::AFFINE, vec![f0, f1, &z(2) + &b])?;
    if !multiplier(&lift)?.is_one() {
        return Err(Error::InconsistentPde(format!("monomial lift {lift} does not preserve omega")));
    }
    Ok((plane, lift))
}

fn require_z1_only(r: &RatFunc, what: &str) -> Result<()> {
    if r.var_mask() & !0b10 != 0 {
        return Err(Error::Arity(format!("{what} must be a function of z1 alone")));
    }
    Ok(())
}

/// Area-preserving Jonquières map
/// `((γz1+δ)²/(εδ−βγ) z0 + r(z1), (εz1+β)/(γz1+δ))`.
pub fn jonquieres_eta(eps: &Q, beta: &Q, gamma: &Q, delta: &Q, r: &RatFunc) -> Result<RationalMap> {
    require_z1_only(r, "the shear term")?;
    let det = eps * delta - beta * gamma;
    if det.is_zero() {
        return Err(Error::SingularFraction);
    }
    let lin = &(&c(gamma) * &z(1)) + &c(delta);
    let sq = &lin * &lin;
    let first = &(&(&sq * &c(&det.recip())) * &z(0)) + r;
    let second = (&(&c(eps) * &z(1)) + &c(beta)).checked_div(&lin)?;
    RationalMap::new(Chart::PLANE01, vec![first, second])
}

/// The exact sub-family: `r = P(z1)(γz1+δ)²` with `P` a polynomial.
pub fn jonquieres_eta_exact(eps: &Q, beta: &Q, gamma: &Q, delta: &Q, p: &MultiPoly) -> Result<RationalMap> {
    let lin = &(&c(gamma) * &z(1)) + &c(delta);
    let r = &(&RatFunc::from_poly(p.clone()) * &lin) * &lin;
    jonquieres_eta(eps, beta, gamma, delta, &r)
}

/// `(z0 a(z0 z1), z1 / a(z0 z1))` for a univariate `a` written in `z0`.
pub fn lambda_family(a: &RatFunc) -> Result<RationalMap> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.var_mask() & !1 != 0 {
        return Err(Error::Arity("a(t) must be univariate (write it in t or z0)".into()));
    }
    let mut s: [Option<RatFunc>; NVARS] = Default::default();
    s[0] = Some(&z(0) * &z(1));
    let at = a.substitute(&s)?;
    RationalMap::new(Chart::PLANE01, vec![&z(0) * &at, z(1).checked_div(&at)?])
}

fn det3(m: &[Q; 9]) -> Q {
    &m[0] * (&m[4] * &m[8] - &m[5] * &m[7]) - &m[1] * (&m[3] * &m[8] - &m[5] * &m[6])
        + &m[2] * (&m[3] * &m[7] - &m[4] * &m[6])
}

/// The projective linear plane map with matrix `m` (row-major), written in
/// the affine chart of `(z0, z1)`.
pub fn plane_linear(m: &[Q; 9]) -> Result<RationalMap> {
    if det3(m).is_zero() {
        return Err(Error::SingularFraction);
    }
    let row = |k: usize| &(&(&c(&m[3 * k]) * &z(0)) + &(&c(&m[3 * k + 1]) * &z(1))) + &c(&m[3 * k + 2]);
    let den = row(2);
    RationalMap::new(Chart::PLANE01, vec![row(0).checked_div(&den)?, row(1).checked_div(&den)?])
}

/// `τ = (z0 + z1², z1)`.
pub fn tau() -> RationalMap {
    RationalMap::new(Chart::PLANE01, vec![&z(0) + &(&z(1) * &z(1)), z(1)]).expect("valid map")
}

/// `g ∘ τ ∘ h` for a pair `(g, h)` satisfying the area-preservation
/// constraints on quadratic maps.
pub fn quadratic_tau(g: &[Q; 9], h: &[Q; 9]) -> Result<RationalMap> {
    let (dg, dh) = (det3(g), det3(h));
    let mut failed = Vec::new();
    if dg.is_zero() {
        failed.push("det g != 0".to_string());
    }
    if dh.is_zero() {
        failed.push("det h != 0".to_string());
    }
    if !g[6].is_zero() {
        failed.push("g6 = 0".to_string());
    }
    if !(&g[7] * &h[3]).is_zero() {
        failed.push("g7*h3 = 0".to_string());
    }
    if !(&g[7] * &h[4]).is_zero() {
        failed.push("g7*h4 = 0".to_string());
    }
    let s = &g[7] * &h[5] + &g[8];
    if &dg * &dh != &s * &s * &s {
        failed.push("det g * det h = (g7*h5 + g8)^3".to_string());
    }
    if !failed.is_empty() {
        return Err(Error::UpsilonViolation(failed.join(", ")));
    }
    let phi = plane_linear(g)?.compose(&tau().compose(&plane_linear(h)?)?)?;
    let det = phi.jacobian_det()?;
    if !det.is_one() {
        return Err(Error::InconsistentPde(format!("composed quadratic map has jacobian {det}")));
    }
    Ok(phi)
}

/// `(εz0+λ, βz1+γ, −βλz1 + εβz2 + δ)`.
pub fn aut_p3_contact(eps: &Q, beta: &Q, lambda: &Q, gamma: &Q, delta: &Q) -> Result<RationalMap> {
    if eps.is_zero() || beta.is_zero() {
        return Err(Error::ZeroScale);
    }
    let third = &(&(&c(&-(beta * lambda)) * &z(1)) + &(&c(&(eps * beta)) * &z(2))) + &c(delta);
    RationalMap::new(
        Chart::AFFINE,
        vec![&(&c(eps) * &z(0)) + &c(lambda), &(&c(beta) * &z(1)) + &c(gamma), third],
    )
}

/// `((γz1+δ)²/(εδ−βγ) z0, (εz1+β)/(γz1+δ), z2)`, a copy of `PGL(2)` in the
/// Klein group preserving `ω`.
pub fn pgl2(eps: &Q, beta: &Q, gamma: &Q, delta: &Q) -> Result<RationalMap> {
    let plane = jonquieres_eta(eps, beta, gamma, delta, &RatFunc::zero())?;
    RationalMap::new(
        Chart::AFFINE,
        vec![plane.component(0).clone(), plane.component(1).clone(), z(2)],
    )
}

/// `(z0 − f'(z1), z1, z2 + f(z1))` with `f = P/Q`.
pub fn kernel_family(f: &RatFunc) -> Result<RationalMap> {
    require_z1_only(f, "f")?;
    RationalMap::new(Chart::AFFINE, vec![&z(0) - &f.derive(1), z(1), &z(2) + f])
}

/// The Lyness map `(z2, (z2+1)/z1)` of order 5.
pub fn lyness() -> RationalMap {
    RationalMap::new(Chart::PLANE12, vec![z(2), (&z(2) + &RatFunc::one()).checked_div(&z(1)).expect("nonzero")])
        .expect("valid map")
        .with_name("lyness")
}

/// The Hénon-type map `(z2, z2² − z1)`.
pub fn henon() -> RationalMap {
    RationalMap::new(Chart::PLANE12, vec![z(2), &(&z(2) * &z(2)) - &z(1)])
        .expect("valid map")
        .with_name("henon")
}

/// The Cremona involution `(1/z1, 1/z2)`.
pub fn cremona() -> RationalMap {
    let one = RatFunc::one();
    RationalMap::new(
        Chart::PLANE12,
        vec![one.checked_div(&z(1)).expect("nonzero"), one.checked_div(&z(2)).expect("nonzero")],
    )
    .expect("valid map")
    .with_name("cremona")
}

/// The `V`-example family
/// `(1/(n z0^(n−1) z2 + (n+1) z0^n (z1+1)), z0^n (z0 + z2 + z0 z1), −z0)`.
pub fn v_example(n: i64) -> Result<RationalMap> {
    use crate::algebra::var_power;
    let nn = RatFunc::from_int(n);
    let n1 = RatFunc::from_int(n + 1);
    let den = &(&(&nn * &var_power(0, n - 1)) * &z(2)) + &(&(&n1 * &var_power(0, n)) * &(&z(1) + &RatFunc::one()));
    let first = RatFunc::one().checked_div(&den)?;
    let second = &var_power(0, n) * &(&(&z(0) + &z(2)) + &(&z(0) * &z(1)));
    RationalMap::new(Chart::AFFINE, vec![first, second, -z(0)])
}

/// The contraction family
/// `(z2(n z0 z1 − z2)/(z2 + (1−n) z0 z1), z1 z2^(n−1), z1 z2^n)`.
pub fn contraction_example(n: i64) -> Result<RationalMap> {
    use crate::algebra::var_power;
    let z0z1 = &z(0) * &z(1);
    let num = &z(2) * &(&(&RatFunc::from_int(n) * &z0z1) - &z(2));
    let den = &z(2) + &(&RatFunc::from_int(1 - n) * &z0z1);
    RationalMap::new(
        Chart::AFFINE,
        vec![num.checked_div(&den)?, &z(1) * &var_power(2, n - 1), &z(1) * &var_power(2, n)],
    )
}
