use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{content_in, gcd};
use super::poly::{Monomial, MultiPoly};
use super::{Q, NVARS};
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials.
///
/// The denominator has coprime integer coefficients and a positive leading
/// coefficient, so every rational function has exactly one representation
/// and `==` is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(i))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// Canonical reduced fraction `num/den`.
    pub fn reduce(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalized(num, den))
    }

    // Caller guarantees the fraction is already in lowest terms.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let (c, den) = den.primitive_split();
        let num = num.scale(&c.recip());
        if num.is_zero() {
            return Self::zero();
        }
        RatFunc { num, den }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn var_mask(&self) -> u8 {
        self.num.var_mask() | self.den.var_mask()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.var_mask() & (1 << var) != 0
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        let k = u32::try_from(k).map_err(|_| Error::Arity("exponent too large".into()))?;
        // Powers of coprime polynomials stay coprime.
        Ok(RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        })
    }

    pub fn derive(&self, var: usize) -> Self {
        if !self.uses_var(var) {
            return Self::zero();
        }
        if self.den.is_one() {
            return Self::from_poly(self.num.derive(var));
        }
        // With g = gcd(d, d'), (n/d)' = (n' d/g - n d'/g) / (d d/g). A factor of
        // d involving `var` drops to one power less in d', so it cannot divide
        // the new numerator; only factors free of `var` may still cancel.
        let dn = self.num.derive(var);
        let dd = self.den.derive(var);
        let g = gcd(&self.den, &dd);
        let d_red = self.den.div_exact(&g).expect("gcd divides");
        let dd_red = dd.div_exact(&g).expect("gcd divides");
        let mut top = &(&dn * &d_red) - &(&self.num * &dd_red);
        if top.is_zero() {
            return Self::zero();
        }
        let mut den = &self.den * &d_red;
        let c = content_in(&self.den, var);
        if !c.is_constant() {
            let h = gcd(&top, &c);
            if !h.is_constant() {
                top = top.div_exact(&h).expect("gcd divides");
                den = den.div_exact(&h).expect("gcd divides");
            }
        }
        Self::normalized(top, den)
    }

    /// Evaluates at a rational point; errors when the denominator vanishes.
    pub fn eval(&self, point: &[Q; NVARS]) -> Result<Q> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Simultaneous substitution `z_i -> assignment[i]`; `None` keeps `z_i`.
    pub fn substitute(&self, assignment: &[Option<RatFunc>; NVARS]) -> Result<Self> {
        let (nn, nd) = subst_poly(&self.num, assignment);
        let (dn, dd) = subst_poly(&self.den, assignment);
        if dn.is_zero() {
            return Err(Error::IndeterminateComposition);
        }
        // self = (nn/nd) / (dn/dd) where nd, dd are products of powers of the
        // substituted denominators.
        Self::reduce(&nn * &dd, &nd * &dn)
    }

    /// Renames variables: `z_i` becomes `z_{perm[i]}`.
    pub fn rename(&self, perm: &[usize; NVARS]) -> Self {
        Self::reduce(self.num.rename(perm), self.den.rename(perm)).expect("nonzero denominator")
    }
}

/// Substitutes into a polynomial, returning numerator and denominator. The
/// denominator is a product of powers of the substituted denominators.
fn subst_poly(p: &MultiPoly, assignment: &[Option<RatFunc>; NVARS]) -> (MultiPoly, MultiPoly) {
    if p.is_zero() {
        return (MultiPoly::zero(), MultiPoly::one());
    }
    let mut max_deg = [0u32; NVARS];
    for i in 0..NVARS {
        if assignment[i].is_some() {
            max_deg[i] = p.degree_in(i);
        }
    }
    // powers[i][k] = (num_i^k, den_i^(max - k))
    let mut num_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(NVARS);
    let mut den_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(NVARS);
    for i in 0..NVARS {
        let d = max_deg[i] as usize;
        match &assignment[i] {
            Some(r) if d > 0 => {
                num_pows.push(power_table(r.num(), d));
                den_pows.push(power_table(r.den(), d));
            }
            _ => {
                num_pows.push(vec![MultiPoly::one()]);
                den_pows.push(vec![MultiPoly::one()]);
            }
        }
    }
    let mut total = MultiPoly::zero();
    for (m, c) in p.terms() {
        let mut keep = *m;
        let mut t = MultiPoly::one();
        for i in 0..NVARS {
            if assignment[i].is_some() {
                let e = m.0[i] as usize;
                keep.0[i] = 0;
                let d = max_deg[i] as usize;
                if d > 0 {
                    t = &t * &num_pows[i][e];
                    t = &t * &den_pows[i][d - e];
                }
            }
        }
        total = &total + &t.mul_monomial(&keep).scale(c);
    }
    let mut den = MultiPoly::one();
    for i in 0..NVARS {
        let d = max_deg[i] as usize;
        if d > 0 {
            den = &den * &den_pows[i][d];
        }
    }
    (total, den)
}

fn power_table(p: &MultiPoly, d: usize) -> Vec<MultiPoly> {
    let mut v = Vec::with_capacity(d + 1);
    v.push(MultiPoly::one());
    for k in 1..=d {
        let next = &v[k - 1] * p;
        v.push(next);
    }
    v
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::reduce(num, self.den.clone()).expect("nonzero denominator");
        }
        // With g = gcd(b, d): a/b + c/d = (a d1 + c b1) / (g b1 d1), and only
        // g can share factors with the new numerator.
        let g = gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))
        };
        RatFunc::normalized(num, &(&g * &b1) * &d1)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        RatFunc::normalized(&a * &c, &b * &d)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn needs_parens_as_factor(p: &MultiPoly) -> bool {
    match p.terms() {
        [(m, c)] => {
            let vars = m.0.iter().filter(|&&e| e > 0).count();
            !(c.is_one() && vars <= 1) && !(m.is_one() && c.is_integer() && c >= &Q::zero())
        }
        _ => true,
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = if needs_parens_as_factor(&self.den) {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

/// `z_i` raised to a possibly negative power.
pub fn var_power(i: usize, k: i64) -> RatFunc {
    let m = MultiPoly::monomial(Monomial::var_pow(i, k.unsigned_abs() as u32), Q::one());
    if k >= 0 {
        RatFunc::from_poly(m)
    } else {
        RatFunc {
            num: MultiPoly::one(),
            den: m,
        }
    }
}
