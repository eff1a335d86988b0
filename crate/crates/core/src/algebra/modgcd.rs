//! Dense modular gcd (Brown) for integer polynomials.
//!
//! Images modulo word-sized primes are computed by evaluating one variable at
//! a time down to univariate Euclid, then interpolated back. Prime images are
//! combined by Chinese remaindering and the candidate is accepted only after
//! exact trial division over the rationals. Unlucky primes and points are
//! recognised by a lex-larger leading monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{Monomial, MultiPoly};
use super::{Q, NVARS};

// Give up (and let the caller fall back) after this many primes.
const MAX_PRIMES: usize = 400;

/// Exponents over the active variables, most significant first.
type Exps = Vec<u32>;

/// Sparse polynomial mod p keyed by exponent vectors in lex order.
type ModPoly = BTreeMap<Exps, u64>;

/// Univariate dense polynomial mod p, lowest degree first, no trailing zeros.
type Dense = Vec<u64>;

/// Gcd of two primitive integer polynomials sharing at least one variable.
/// Returns the canonical associate, or `None` if the prime budget runs out.
pub(crate) fn modular_gcd(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let mask = f.var_mask() | g.var_mask();
    let vars: Vec<usize> = (0..NVARS).filter(|&v| mask & (1 << v) != 0).collect();
    let fi = to_int_terms(f, &vars)?;
    let gi = to_int_terms(g, &vars)?;
    let lf = fi.last_key_value()?.1.clone();
    let lg = gi.last_key_value()?.1.clone();
    let gamma = lf.gcd(&lg);

    let mut acc: Option<(Exps, BTreeMap<Exps, BigInt>, BigInt)> = None;
    let mut last_candidate: Option<BTreeMap<Exps, BigInt>> = None;
    let mut primes = PrimeIter::new();
    for _ in 0..MAX_PRIMES {
        let p = primes.next()?;
        let pb = BigInt::from(p);
        if (&lf % &pb).is_zero() || (&lg % &pb).is_zero() {
            continue;
        }
        let fp = reduce_mod(&fi, p);
        let gp = reduce_mod(&gi, p);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let Some(h) = gcd_mod(&fp, &gp, vars.len(), p, &mut rng) else {
            continue;
        };
        let lead = h.last_key_value().expect("gcd is nonzero").0.clone();
        if lead.iter().all(|&e| e == 0) {
            return Some(MultiPoly::one());
        }
        let scale = mod_of(&gamma, p);
        let h: ModPoly = h.into_iter().map(|(k, c)| (k, mul(c, scale, p))).collect();
        match &mut acc {
            Some((acc_lead, _, _)) if lead.cmp(acc_lead) == Ordering::Greater => continue,
            Some((acc_lead, vals, modulus)) if lead == *acc_lead => crt_step(vals, modulus, &h, p),
            _ => {
                let vals = h.iter().map(|(k, &c)| (k.clone(), BigInt::from(c))).collect();
                acc = Some((lead, vals, pb));
                last_candidate = None;
                continue;
            }
        }
        let (_, vals, modulus) = acc.as_ref().expect("set above");
        let half = modulus / 2;
        let candidate: BTreeMap<Exps, BigInt> = vals
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.clone(), if v > &half { v - modulus } else { v.clone() }))
            .collect();
        if last_candidate.as_ref() == Some(&candidate) {
            let poly = from_int_terms(&candidate, &vars).canonical_associate();
            if f.div_exact(&poly).is_some() && g.div_exact(&poly).is_some() {
                return Some(poly);
            }
            // a bad image slipped through; start over
            acc = None;
            last_candidate = None;
            continue;
        }
        last_candidate = Some(candidate);
    }
    None
}

fn crt_step(vals: &mut BTreeMap<Exps, BigInt>, modulus: &mut BigInt, image: &ModPoly, p: u64) {
    let inv = inverse(mod_of(modulus, p), p);
    for k in image.keys() {
        vals.entry(k.clone()).or_insert_with(BigInt::zero);
    }
    for (k, v) in vals.iter_mut() {
        let r = image.get(k).copied().unwrap_or(0);
        let t = mul(sub(r, mod_of(v, p), p), inv, p);
        *v += &*modulus * BigInt::from(t);
    }
    *modulus *= BigInt::from(p);
}

fn to_int_terms(f: &MultiPoly, vars: &[usize]) -> Option<BTreeMap<Exps, BigInt>> {
    let mut out = BTreeMap::new();
    for (m, c) in f.terms() {
        if !c.is_integer() {
            return None;
        }
        out.insert(vars.iter().map(|&v| m.0[v]).collect(), c.numer().clone());
    }
    Some(out)
}

fn from_int_terms(t: &BTreeMap<Exps, BigInt>, vars: &[usize]) -> MultiPoly {
    MultiPoly::from_terms(t.iter().map(|(k, c)| {
        let mut m = [0; NVARS];
        for (&v, &e) in vars.iter().zip(k) {
            m[v] = e;
        }
        (Monomial(m), Q::from_integer(c.clone()))
    }))
}

fn reduce_mod(t: &BTreeMap<Exps, BigInt>, p: u64) -> ModPoly {
    t.iter()
        .map(|(k, c)| (k.clone(), mod_of(c, p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn mod_of(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Monic (in lex order) gcd mod p of polynomials in `k` variables; `None`
/// when every tried evaluation point turns out unlucky.
fn gcd_mod(a: &ModPoly, b: &ModPoly, k: usize, p: u64, rng: &mut ChaCha8Rng) -> Option<ModPoly> {
    if a.is_empty() {
        return Some(monic(b, p));
    }
    if b.is_empty() {
        return Some(monic(a, p));
    }
    if k == 1 {
        let g = dense_gcd(to_dense(a), to_dense(b), p);
        return Some(from_dense(&g));
    }
    // View a, b as polynomials in the first k-1 variables over Z_p[y].
    let (ca, a1) = split_content(a, p);
    let (cb, b1) = split_content(b, p);
    let c = dense_gcd(ca, cb, p);
    let lca = a1.last_key_value().expect("nonzero").1;
    let lcb = b1.last_key_value().expect("nonzero").1;
    let gamma = dense_gcd(lca.clone(), lcb.clone(), p);
    let dy_a = a1.values().map(|d| d.len()).max().unwrap_or(1) - 1;
    let dy_b = b1.values().map(|d| d.len()).max().unwrap_or(1) - 1;
    let needed = gamma.len() - 1 + dy_a.min(dy_b) + 1;

    let mut lead: Option<Exps> = None;
    let mut h: BTreeMap<Exps, Dense> = BTreeMap::new();
    let mut nodes: Dense = vec![1];
    let mut points = 0usize;
    let mut attempts = 0usize;
    while points < needed {
        attempts += 1;
        if attempts > 4 * needed + 64 {
            return None;
        }
        let y = rng.gen_range(0..p);
        if eval(lca, y, p) == 0 || eval(lcb, y, p) == 0 || eval(&nodes, y, p) == 0 {
            continue;
        }
        let ga = gcd_mod(&eval_last(&a1, y, p), &eval_last(&b1, y, p), k - 1, p, rng)?;
        let glead = ga.last_key_value().expect("nonzero").0.clone();
        if glead.iter().all(|&e| e == 0) {
            // coprime apart from the content in y
            return Some(monic(&embed(&BTreeMap::from([(glead, c)])), p));
        }
        match lead.as_ref().map(|l| glead.cmp(l)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Less) | None => {
                lead = Some(glead);
                h.clear();
                nodes = vec![1];
                points = 0;
            }
            Some(Ordering::Equal) => {}
        }
        // Newton step: h += (gamma(y) ga - h(y)) / nodes(y) * nodes
        let gy = eval(&gamma, y, p);
        let inv = inverse(eval(&nodes, y, p), p);
        for key in ga.keys() {
            h.entry(key.clone()).or_default();
        }
        for (key, hk) in h.iter_mut() {
            let target = mul(ga.get(key).copied().unwrap_or(0), gy, p);
            let delta = mul(sub(target, eval(hk, y, p), p), inv, p);
            if delta != 0 {
                *hk = dense_add(hk, &dense_scale(&nodes, delta, p), p);
            }
        }
        nodes = dense_mul(&nodes, &[p - y % p, 1], p);
        points += 1;
    }
    h.retain(|_, d| !d.is_empty());
    let content = h.values().fold(Vec::new(), |g, d| dense_gcd(g, d.clone(), p));
    let prim: BTreeMap<Exps, Dense> = h
        .into_iter()
        .map(|(k, d)| (k, dense_mul(&dense_divexact(&d, &content, p), &c, p)))
        .collect();
    Some(monic(&embed(&prim), p))
}

/// Splits off the content in the last variable: returns it together with the
/// primitive part as a map from leading exponents to univariate coefficients.
fn split_content(a: &ModPoly, p: u64) -> (Dense, BTreeMap<Exps, Dense>) {
    let mut groups: BTreeMap<Exps, Dense> = BTreeMap::new();
    for (k, &c) in a {
        let (x, y) = k.split_at(k.len() - 1);
        let d = groups.entry(x.to_vec()).or_default();
        let e = y[0] as usize;
        if d.len() <= e {
            d.resize(e + 1, 0);
        }
        d[e] = c;
    }
    let content = groups.values().fold(Vec::new(), |g, d| dense_gcd(g, d.clone(), p));
    for d in groups.values_mut() {
        *d = dense_divexact(d, &content, p);
    }
    (content, groups)
}

fn eval_last(a: &BTreeMap<Exps, Dense>, y: u64, p: u64) -> ModPoly {
    a.iter()
        .map(|(k, d)| (k.clone(), eval(d, y, p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn embed(a: &BTreeMap<Exps, Dense>) -> ModPoly {
    let mut out = ModPoly::new();
    for (k, d) in a {
        for (e, &c) in d.iter().enumerate() {
            if c != 0 {
                let mut key = k.clone();
                key.push(e as u32);
                out.insert(key, c);
            }
        }
    }
    out
}

fn monic(a: &ModPoly, p: u64) -> ModPoly {
    let Some((_, &lc)) = a.last_key_value() else { return ModPoly::new() };
    let inv = inverse(lc, p);
    a.iter().map(|(k, &c)| (k.clone(), mul(c, inv, p))).collect()
}

fn to_dense(a: &ModPoly) -> Dense {
    let n = a.keys().map(|k| k[0] as usize).max().map_or(0, |d| d + 1);
    let mut d = vec![0; n];
    for (k, &c) in a {
        d[k[0] as usize] = c;
    }
    d
}

fn from_dense(d: &Dense) -> ModPoly {
    d.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (vec![e as u32], c))
        .collect()
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inverse(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow(a, p - 2, p)
}

fn trim(mut d: Dense) -> Dense {
    while d.last() == Some(&0) {
        d.pop();
    }
    d
}

fn eval(d: &[u64], y: u64, p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| (mul(acc, y, p) + c) % p)
}

fn dense_add(a: &[u64], b: &[u64], p: u64) -> Dense {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(v)
}

fn dense_scale(a: &[u64], s: u64, p: u64) -> Dense {
    trim(a.iter().map(|&c| mul(c, s, p)).collect())
}

fn dense_mul(a: &[u64], b: &[u64], p: u64) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
fn dense_divrem(a: &[u64], b: &[u64], p: u64) -> (Dense, Dense) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inverse(*b.last().expect("nonzero divisor"), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = mul(r[i + b.len() - 1], inv, p);
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = sub(r[i + j], mul(c, bj, p), p);
            }
        }
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

fn dense_divexact(a: &[u64], b: &[u64], p: u64) -> Dense {
    let (q, r) = dense_divrem(a, b, p);
    debug_assert!(r.is_empty(), "inexact division mod {p}");
    q
}

/// Monic gcd; `gcd(0, 0)` is the empty polynomial.
fn dense_gcd(a: Dense, b: Dense, p: u64) -> Dense {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let (_, r) = dense_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    match a.last() {
        Some(&lc) => dense_scale(&a, inverse(lc, p), p),
        None => a,
    }
}

/// Primes just below 2^31, largest first.
struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    fn new() -> Self {
        PrimeIter { next: (1 << 31) - 1 }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let n = self.next;
            self.next -= 2;
            if is_prime(n) {
                return Some(n);
            }
        }
        None
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 || n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gcd::gcd_prs;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::from_int(n)
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeIter::new().take(3).collect();
        assert_eq!(ps, vec![2147483647, 2147483629, 2147483587]);
    }

    #[test]
    fn dense_gcd_of_shared_root() {
        let p = 101;
        // (y - 1)(y - 2) and (y - 1)(y + 3)
        let a = dense_mul(&[p - 1, 1], &[p - 2, 1], p);
        let b = dense_mul(&[p - 1, 1], &[3, 1], p);
        assert_eq!(dense_gcd(a, b, p), vec![p - 1, 1]);
    }

    #[test]
    fn agrees_with_remainder_sequence() {
        let u = &(&(&z(0) * &z(1)) + &c(3)) - &z(2).pow(2);
        let v = &(&z(0).pow(2) - &(&z(1) * &z(2))) + &c(1);
        let w = &(&z(1).pow(3) + &z(0)) - &c(2);
        let f = (&u * &v).canonical_associate();
        let g = (&u * &w).canonical_associate();
        assert_eq!(modular_gcd(&f, &g).unwrap(), gcd_prs(&f, &g));
        assert_eq!(modular_gcd(&f, &g).unwrap(), u.canonical_associate());
        assert!(modular_gcd(&v.canonical_associate(), &w.canonical_associate()).unwrap().is_one());
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let big = MultiPoly::constant(Q::from_integer(BigInt::from(10).pow(40) + 7));
        let u = &(&z(0) * &big) + &z(1);
        let f = (&u * &(&z(0) + &c(1))).canonical_associate();
        let g = (&u * &(&z(1) - &c(1))).canonical_associate();
        assert_eq!(modular_gcd(&f, &g).unwrap(), u.canonical_associate());
    }

    #[test]
    fn content_in_the_last_variable_is_kept() {
        let u = &z(1) + &c(1);
        let f = (&u * &(&z(0) + &z(1))).canonical_associate();
        let g = (&u * &(&z(0) - &z(1))).canonical_associate();
        assert_eq!(modular_gcd(&f, &g).unwrap(), u);
    }

    #[test]
    fn gamma_scaling_recovers_a_non_monic_gcd() {
        let u = &(&z(0) * &z(1)).scale(&Q::from_integer(3.into())) + &c(2);
        let f = (&u * &(&z(0).pow(2) + &c(5))).canonical_associate();
        let g = (&u * &(&z(1) * &z(0) - &c(7))).canonical_associate();
        assert_eq!(modular_gcd(&f, &g).unwrap(), u.canonical_associate());
    }
}
