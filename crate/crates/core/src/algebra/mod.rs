//! Exact polynomial and rational-function arithmetic in `z0..z3`.

mod gcd;
mod modgcd;
mod poly;
mod ratfunc;
mod squarefree;
mod upoly;

pub use gcd::{content_in, gcd, gcd_prs, lcm};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::{var_power, RatFunc};
pub use squarefree::{squarefree, valuation, SquarefreeDecomposition};
pub use upoly::UPoly;

pub(crate) use poly::fmt_rational;

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;

/// Number of ambient variables `z0..z3`.
pub const NVARS: usize = 4;

/// Parses an integer-or-fraction literal such as `-3/4`.
pub fn rational(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
