use super::gcd::{content_in, gcd};
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::{Q, NVARS};
use crate::error::{Error, Result};

/// `input = unit * prod(factor^multiplicity)`, factors pairwise coprime and
/// squarefree with respect to the chosen variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub factors: Vec<(MultiPoly, u32)>,
    pub unit: Q,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> MultiPoly {
        self.factors
            .iter()
            .fold(MultiPoly::constant(self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

/// Yun's algorithm in `var`. The content with respect to `var` (free of
/// `var`, hence a unit over the coefficient field) is folded into the
/// multiplicity-one factor.
pub fn squarefree(p: &MultiPoly, var: usize) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (unit, pp) = p.primitive_split();
    if pp.is_constant() {
        return Ok(SquarefreeDecomposition {
            factors: Vec::new(),
            unit,
        });
    }
    let cont = content_in(&pp, var);
    let a = pp.div_exact(&cont).expect("content divides").canonical_associate();
    let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
    if a.degree_in(var) > 0 {
        let b = a.derive(var);
        let c = gcd(&a, &b);
        let mut w = a.div_exact(&c).expect("gcd divides");
        let mut y = b.div_exact(&c).expect("gcd divides");
        let mut z = &y - &w.derive(var);
        let mut i = 1;
        while w.degree_in(var) > 0 {
            let g = gcd(&w, &z);
            if g.degree_in(var) > 0 {
                factors.push((g.clone(), i));
            }
            w = w.div_exact(&g).expect("gcd divides");
            y = z.div_exact(&g).expect("gcd divides");
            z = &y - &w.derive(var);
            i += 1;
        }
    }
    if !cont.is_constant() {
        match factors.iter_mut().find(|(_, m)| *m == 1) {
            Some(f) => f.0 = (&f.0 * &cont).canonical_associate(),
            None => factors.insert(0, (cont, 1)),
        }
    }
    let prod = factors
        .iter()
        .fold(MultiPoly::one(), |acc, (f, m)| &acc * &f.pow(*m));
    let unit = unit * (pp.leading_coeff() / prod.leading_coeff());
    Ok(SquarefreeDecomposition { factors, unit })
}

/// Order of vanishing of `r` along `f = 0`, negative for poles.
///
/// `f` must be non-constant and squarefree; irreducibility is the caller's
/// responsibility.
pub fn valuation(r: &RatFunc, f: &MultiPoly) -> Result<i64> {
    if f.is_constant() {
        return Err(Error::InvalidDivisor("divisor is constant".into()));
    }
    let mut g = f.clone();
    for v in 0..NVARS {
        if f.uses_var(v) {
            g = gcd(&g, &f.derive(v));
        }
    }
    if !g.is_constant() {
        return Err(Error::InvalidDivisor(format!("{f} is not squarefree")));
    }
    if r.is_zero() {
        return Err(Error::InvalidDivisor("valuation of zero".into()));
    }
    Ok(multiplicity(r.num(), f) as i64 - multiplicity(r.den(), f) as i64)
}

fn multiplicity(p: &MultiPoly, f: &MultiPoly) -> u32 {
    let mut p = p.clone();
    let mut n = 0;
    while let Some(q) = p.div_exact(f) {
        p = q;
        n += 1;
    }
    n
}
