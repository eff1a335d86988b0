//! Multivariate gcd over the rationals.
//!
//! Inputs are first reduced to primitive integer polynomials. Cheap structural
//! cases (constants, monomial factors, variables present on one side only,
//! trial division) are settled directly. The general case uses a modular gcd,
//! falling back to the heuristic evaluation/interpolation gcd and finally to a
//! primitive polynomial remainder sequence in one variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::modgcd::modular_gcd;
use super::poly::{Monomial, MultiPoly};
use super::{Q, NVARS};

/// Canonical gcd: coprime integer coefficients, positive leading coefficient.
/// `gcd(p, 0)` is the canonical associate of `p`; `gcd(0, 0) = 0`.
pub fn gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.canonical_associate();
    }
    if q.is_zero() {
        return p.canonical_associate();
    }
    gcd_prim(&p.canonical_associate(), &q.canonical_associate())
}

/// Gcd computed only through the remainder-sequence route. Exposed so tests
/// can cross-check the heuristic path.
pub fn gcd_prs(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.canonical_associate();
    }
    if q.is_zero() {
        return p.canonical_associate();
    }
    let (p, q) = (p.canonical_associate(), q.canonical_associate());
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one();
    }
    prs(&p, &q)
}

fn gcd_prim(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one();
    }
    if p == q {
        return p.clone();
    }
    let mp = p.monomial_content();
    let mq = q.monomial_content();
    if !mp.is_one() || !mq.is_one() {
        let p1 = p.div_monomial(&mp).expect("monomial content divides");
        let q1 = q.div_monomial(&mq).expect("monomial content divides");
        return gcd_prim(&p1, &q1).mul_monomial(&mp.gcd(&mq));
    }
    let (vp, vq) = (p.var_mask(), q.var_mask());
    if vp & !vq != 0 {
        return gcd_with_content(p, vp & !vq, q);
    }
    if vq & !vp != 0 {
        return gcd_with_content(q, vq & !vp, p);
    }
    let (small, large) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    if large.div_exact(small).is_some() {
        return small.clone();
    }
    if let Some(g) = modular_gcd(p, q) {
        return g;
    }
    if let Some(g) = heuristic(p, q) {
        return g.canonical_associate();
    }
    prs(p, q)
}

/// Gcd of `q` with every coefficient of `p` viewed as a polynomial in the
/// variables of `mask`. Valid because the gcd cannot involve those variables.
fn gcd_with_content(p: &MultiPoly, mask: u8, q: &MultiPoly) -> MultiPoly {
    let mut coeffs = coefficients_in_mask(p, mask);
    coeffs.sort_by_key(|c| (c.len(), c.total_degree()));
    let mut g = q.clone();
    for c in coeffs {
        g = gcd_prim(&c.canonical_associate(), &g);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn coefficients_in_mask(p: &MultiPoly, mask: u8) -> Vec<MultiPoly> {
    let mut groups: BTreeMap<[u32; NVARS], Vec<(Monomial, Q)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = [0; NVARS];
        let mut rest = *m;
        for i in 0..NVARS {
            if mask & (1 << i) != 0 {
                key[i] = m.0[i];
                rest.0[i] = 0;
            }
        }
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    groups.into_values().map(MultiPoly::from_terms).collect()
}

/// Content of `p` with respect to `var`: gcd of its coefficients.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p
        .coefficients_in(var)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    coeffs.sort_by_key(|c| (c.len(), c.total_degree()));
    let mut g = MultiPoly::zero();
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let c = content_in(p, var);
    if c.is_constant() {
        p.canonical_associate()
    } else {
        p.div_exact(&c)
            .expect("content divides")
            .canonical_associate()
    }
}

fn prs(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let both = p.var_mask() & q.var_mask();
    let var = (0..NVARS)
        .filter(|&v| both & (1 << v) != 0)
        .min_by_key(|&v| p.degree_in(v).max(q.degree_in(v)))
        .expect("non-constant inputs share a variable");
    let cp = content_in(p, var);
    let cq = content_in(q, var);
    let c = gcd(&cp, &cq);
    let mut a = p.div_exact(&cp).expect("content divides").canonical_associate();
    let mut b = q.div_exact(&cq).expect("content divides").canonical_associate();
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break b;
        }
        if r.degree_in(var) == 0 {
            break MultiPoly::one();
        }
        a = b;
        b = primitive_in(&r, var);
    };
    (&c * &primitive_in(&g, var)).canonical_associate()
}

pub(crate) fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let db = b.degree_in(var);
    let lb = b.lead_coeff_in(var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.lead_coeff_in(var);
        let shifted = (&lr * b).mul_monomial(&Monomial::var_pow(var, dr - db));
        r = (&(&lb * &r) - &shifted).canonical_associate();
    }
    r
}

// Evaluated integers larger than this fall back to the remainder sequence.
const HEU_BIT_LIMIT: u64 = 60_000;

/// Heuristic gcd of integer polynomials (evaluation at a large integer,
/// recursive gcd, balanced-digit interpolation, verification by division).
/// Returns the full gcd including the integer content, or `None`.
fn heuristic(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    debug_assert!(f.is_integral() && g.is_integral());
    let cf = int_content(f);
    let cg = int_content(g);
    let c = cf.gcd(&cg);
    if f.is_constant() || g.is_constant() {
        return Some(MultiPoly::constant(Q::from_integer(c)));
    }
    let cq = Q::from_integer(c.clone());
    let cq_inv = cq.recip();
    let f = f.scale(&cq_inv);
    let g = g.scale(&cq_inv);
    let mask = f.var_mask() | g.var_mask();
    let var = (0..NVARS)
        .filter(|&v| mask & (1 << v) != 0)
        .max_by_key(|&v| f.degree_in(v).max(g.degree_in(v)))?;
    let deg = u64::from(f.degree_in(var).max(g.degree_in(var))) + 1;
    let fnorm = f.max_norm();
    let gnorm = g.max_norm();
    let bound: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + 29;
    let lf = f.leading_coeff().numer().abs();
    let lg = g.leading_coeff().numer().abs();
    let alt: BigInt = BigInt::from(2) * (&fnorm / &lf).min(&gnorm / &lg) + 2;
    let capped: BigInt = BigInt::from(99) * bound.sqrt();
    let mut xi = bound.min(capped).max(alt);
    for _ in 0..6 {
        if xi.bits() * deg > HEU_BIT_LIMIT {
            return None;
        }
        let xq = Q::from_integer(xi.clone());
        let ff = f.eval_var(var, &xq);
        let gg = g.eval_var(var, &xq);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heuristic(&ff, &gg) {
                let cand = interpolate(&h, &xi, var).canonical_associate();
                if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                    return Some(cand.scale(&cq));
                }
            }
        }
        let root = xi.sqrt().sqrt();
        xi = (&xi * BigInt::from(73794) * root) / BigInt::from(27011);
    }
    None
}

fn int_content(p: &MultiPoly) -> BigInt {
    p.terms()
        .iter()
        .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

/// Reads every integer coefficient of `h` in balanced base `xi` and turns the
/// digits into powers of `var`.
fn interpolate(h: &MultiPoly, xi: &BigInt, var: usize) -> MultiPoly {
    let half = xi / 2;
    let mut terms = Vec::new();
    for (m, c) in h.terms() {
        let mut n = c.numer().clone();
        let mut k = 0u32;
        while !n.is_zero() {
            let mut d = n.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                terms.push((m.mul(&Monomial::var_pow(var, k)), Q::from_integer(d.clone())));
            }
            n = (n - d) / xi;
            k += 1;
        }
    }
    MultiPoly::from_terms(terms)
}

/// Least common multiple, canonical.
pub fn lcm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero();
    }
    let g = gcd(p, q);
    (&p.div_exact(&g).expect("gcd divides") * q).canonical_associate()
}
