//! Univariate polynomials in one chosen variable with coefficients in the
//! field of rational functions of the remaining variables.

use super::poly::{Monomial, MultiPoly};
use super::ratfunc::{var_power, RatFunc};
use super::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    var: usize,
    coeffs: Vec<RatFunc>,
}

impl UPoly {
    pub fn zero(var: usize) -> Self {
        UPoly {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(var: usize, c: RatFunc) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    pub fn from_coeffs(var: usize, mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(RatFunc::is_zero) {
            coeffs.pop();
        }
        UPoly { var, coeffs }
    }

    pub fn from_poly(p: &MultiPoly, var: usize) -> Self {
        let coeffs = p.coefficients_in(var).into_iter().map(RatFunc::from_poly).collect();
        Self::from_coeffs(var, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at -1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = RatFunc::zero();
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                a + b
            })
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.var);
        }
        let mut coeffs = vec![RatFunc::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(self.var, coeffs)
    }

    pub fn scale(&self, c: &RatFunc) -> UPoly {
        Self::from_coeffs(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> UPoly {
        (0..k).fold(Self::constant(self.var, RatFunc::one()), |acc, _| acc.mul(self))
    }

    /// Formal derivative in the distinguished variable.
    pub fn derive(&self) -> UPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Q::from_integer((k as i64).into())))
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn integrate(&self) -> UPoly {
        let mut coeffs = vec![RatFunc::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&Q::new(1.into(), ((k + 1) as i64).into())));
        }
        Self::from_coeffs(self.var, coeffs)
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree();
        let inv = d.lc().recip().expect("nonzero leading coefficient");
        let mut r = self.clone();
        let mut q = vec![RatFunc::zero(); (self.degree() - dd + 1).max(0) as usize];
        while !r.is_zero() && r.degree() >= dd {
            let k = (r.degree() - dd) as usize;
            let c = &r.lc() * &inv;
            let mut shifted = vec![RatFunc::zero(); k];
            shifted.extend(d.coeffs.iter().map(|a| a * &c));
            r = r.sub(&Self::from_coeffs(self.var, shifted));
            q[k] = c;
        }
        (Self::from_coeffs(self.var, q), r)
    }

    pub fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Returns `(s, t, g)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
        let var = a.var;
        let one = Self::constant(var, RatFunc::one());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero(var));
        let (mut t0, mut t1) = (Self::zero(var), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = r0.lc().recip().expect("gcd of nonzero inputs");
        (s0.scale(&inv), t0.scale(&inv), r0.scale(&inv))
    }

    /// Solves `s*a + t*b = c` with `deg s < deg b`, assuming `gcd(a, b) = 1`.
    pub fn solve_bezout(a: &UPoly, b: &UPoly, c: &UPoly) -> (UPoly, UPoly) {
        let (s0, _, g) = Self::ext_gcd(a, b);
        assert_eq!(g.degree(), 0, "inputs must be coprime");
        let (_, s) = s0.mul(c).div_rem(b);
        let t = c.sub(&s.mul(a)).exact_div(b);
        (s, t)
    }

    /// Collapses back into a single rational function.
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if !c.is_zero() {
                acc = &acc + &(c * &var_power(self.var, k as i64));
            }
        }
        acc
    }

    pub fn is_polynomial_coefficients(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_polynomial)
    }

    /// Only valid when every coefficient is a polynomial.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let mut acc = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_polynomial() {
                return None;
            }
            acc = &acc + &c.num().mul_monomial(&Monomial::var_pow(self.var, k as u32));
        }
        Some(acc)
    }
}
