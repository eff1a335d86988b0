use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Q, NVARS};

/// Exponent vector over `z0..z3`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `z0`, then `z1`, and so on. The largest monomial is the leading one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn var_pow(i: usize, k: u32) -> Monomial {
        let mut e = [0; NVARS];
        e[i] = k;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..NVARS).all(|i| self.0[i] <= other.0[i])
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].min(other.0[i]);
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `z0..z3` with exact rational coefficients.
///
/// Terms are kept sorted from the leading monomial downwards and never carry
/// a zero coefficient, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Q)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Q::from_integer(c.into()))
    }

    pub fn var(i: usize) -> Self {
        assert!(i < NVARS, "variable index out of range");
        MultiPoly {
            terms: vec![(Monomial::var(i), Q::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<Monomial, Q>) -> Self {
        MultiPoly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Terms from the leading monomial downwards.
    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Q::zero)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Q {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Q::zero(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0 .0[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0 .0[var]).min().unwrap_or(0)
    }

    /// Bitmask of the variables that occur.
    pub fn var_mask(&self) -> u8 {
        let mut mask = 0u8;
        for (m, _) in &self.terms {
            for i in 0..NVARS {
                if m.0[i] > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.var_mask() & (1 << var) != 0
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::ONE,
            Some((m, _)) => it.fold(*m, |acc, (m, _)| acc.gcd(m)),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    /// Divides every term by `m`; `None` unless `m` divides all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            terms.push((t.checked_div(m)?, c.clone()));
        }
        Some(MultiPoly { terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derive(&self, var: usize) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut m2 = *m;
                m2.0[var] -= 1;
                terms.push((m2, c * Q::from_integer(e.into())));
            }
        }
        // Lowering one exponent can reorder terms of equal degree.
        Self::from_terms(terms)
    }

    pub fn eval(&self, point: &[Q; NVARS]) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if m.0[i] > 0 {
                    t *= num_traits::pow(point[i].clone(), m.0[i] as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Sets `var` to the constant `value`.
    pub fn eval_var(&self, var: usize, value: &Q) -> Self {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = *m;
            m2.0[var] = 0;
            let k = c * num_traits::pow(value.clone(), e as usize);
            accumulate(&mut acc, m2, k);
        }
        Self::from_map(acc)
    }

    /// Renames variables: variable `i` becomes `perm[i]`.
    pub fn rename(&self, perm: &[usize; NVARS]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = [0; NVARS];
            for i in 0..NVARS {
                e[perm[i]] += m.0[i];
            }
            (Monomial(e), c.clone())
        }))
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2.0[var] as usize;
            m2.0[var] = 0;
            buckets[e].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { terms: ts }
            })
            .collect()
    }

    pub fn from_coefficients_in(var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut acc = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var_pow(var, k as u32);
            for (m, q) in &c.terms {
                accumulate(&mut acc, m.mul(&shift), q.clone());
            }
        }
        Self::from_map(acc)
    }

    /// Leading coefficient with respect to `var`, a polynomial free of `var`.
    pub fn lead_coeff_in(&self, var: usize) -> MultiPoly {
        let d = self.degree_in(var);
        let mut terms: Vec<(Monomial, Q)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] == d)
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.0[var] = 0;
                (m2, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            return self.div_monomial(m).map(|p| p.scale(&c.recip()));
        }
        for v in 0..NVARS {
            if d.degree_in(v) > self.degree_in(v) || d.min_degree_in(v) > self.min_degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = d.terms[0].clone();
        let lc_inv = lc.recip();
        let mut rem: BTreeMap<Monomial, Q> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let qm = m.checked_div(&lm)?;
            let qc = c * &lc_inv;
            for (dm, dc) in &d.terms {
                accumulate(&mut rem, dm.mul(&qm), -(dc * &qc));
            }
            quot.push((qm, qc));
        }
        Some(MultiPoly { terms: quot })
    }

    /// Integer content removal: returns `(c, p)` with `self = c * p`, where `p`
    /// has coprime integer coefficients and positive leading coefficient.
    pub fn primitive_split(&self) -> (Q, MultiPoly) {
        if self.is_zero() {
            return (Q::one(), Self::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = Q::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// The associate with coprime integer coefficients and positive leading
    /// coefficient; used as the canonical representative of gcds and factors.
    pub fn canonical_associate(&self) -> MultiPoly {
        self.primitive_split().1
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Largest absolute coefficient (integer polynomials only).
    pub fn max_norm(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

pub(crate) fn accumulate(acc: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn merge(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &Q| if negate_b { -c.clone() } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        match a.terms[i].0.cmp(&b.terms[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b.terms[j].0, sign(&b.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a.terms[i].1 - &b.terms[j].1
                } else {
                    &a.terms[i].1 + &b.terms[j].1
                };
                if !c.is_zero() {
                    out.push((a.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (*m, sign(c))));
    MultiPoly { terms: out }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if self.is_integral() && rhs.is_integral() {
            return mul_integral(self, rhs);
        }
        let mut acc = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                accumulate(&mut acc, ma.mul(mb), ca * cb);
            }
        }
        MultiPoly::from_map(acc)
    }
}

// Integer coefficients are the common case; skipping rational normalization
// in the inner loop is a large constant-factor win.
fn mul_integral(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut acc: std::collections::HashMap<Monomial, BigInt> =
        std::collections::HashMap::with_capacity(a.terms.len() * b.terms.len() / 2 + 1);
    for (ma, ca) in &a.terms {
        let ca = ca.numer();
        for (mb, cb) in &b.terms {
            let prod = ca * cb.numer();
            *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += prod;
        }
    }
    let mut terms: Vec<(Monomial, Q)> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m, Q::from_integer(c)))
        .collect();
    terms.sort_by(|x, y| y.0.cmp(&x.0));
    MultiPoly { terms }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..NVARS {
        match m.0[i] {
            0 => {}
            1 => parts.push(format!("z{i}")),
            e => parts.push(format!("z{i}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if m.is_one() {
                fmt_rational(&abs)
            } else if abs.is_one() {
                fmt_monomial(m)
            } else {
                format!("{}*{}", fmt_rational(&abs), fmt_monomial(m))
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
