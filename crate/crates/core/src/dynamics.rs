//! Degree sequences of iterates and a coarse growth classification.

use std::fmt;

use crate::algebra::Q;
use crate::error::{Error, Result};
use crate::families::klein_embed;
use crate::maps::RationalMap;

pub const DEFAULT_WINDOW: usize = 6;
const MIN_WINDOW: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    /// `deg φ¹, …, deg φᴺ`.
    pub degrees: Vec<u32>,
    pub window: usize,
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Degrees of the reduced iterates `φ, φ², …, φᴺ`.
pub fn degree_sequence(phi: &RationalMap, window: usize) -> Result<DegreeSequence> {
    let mut degrees = Vec::with_capacity(window);
    let mut it = phi.clone();
    for k in 0..window {
        degrees.push(it.degree());
        if k + 1 < window {
            it = it.compose(phi)?;
        }
    }
    Ok(DegreeSequence { degrees, window })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Bounded,
    PolynomialLike,
    ExponentialLike,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Bounded => "bounded",
            Growth::PolynomialLike => "polynomial_like",
            Growth::ExponentialLike => "exponential_like",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthClass {
    pub verdict: Growth,
    /// Successive ratios `d(k+1)/d(k)`.
    pub ratio_evidence: Vec<Q>,
}

/// Classifies a finite window of degrees.
///
/// * bounded: the maximum over the second half does not exceed the maximum
///   over the first half (the running maximum has stopped growing);
/// * exponential_like: the last `⌊N/2⌋` ratios are all at least `3/2`;
/// * polynomial_like: anything else.
pub fn classify_growth(s: &DegreeSequence) -> Result<GrowthClass> {
    let d = &s.degrees;
    if d.len() < MIN_WINDOW {
        return Err(Error::WindowTooSmall(d.len()));
    }
    let ratio_evidence: Vec<Q> = d
        .windows(2)
        .map(|w| Q::new(w[1].into(), w[0].into()))
        .collect();
    let half = d.len() / 2;
    let head = d[..half].iter().max().expect("nonempty");
    let tail = d[half..].iter().max().expect("nonempty");
    let threshold = Q::new(3.into(), 2.into());
    let verdict = if tail <= head {
        Growth::Bounded
    } else if ratio_evidence[ratio_evidence.len() - half..]
        .iter()
        .all(|r| *r >= threshold)
    {
        Growth::ExponentialLike
    } else {
        Growth::PolynomialLike
    };
    Ok(GrowthClass {
        verdict,
        ratio_evidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameOrder {
    pub plane: DegreeSequence,
    pub klein: DegreeSequence,
    pub plane_class: GrowthClass,
    pub klein_class: GrowthClass,
    pub same: bool,
}

/// Degrees of `𝒦(φ)ⁿ`, computed as `𝒦(φⁿ)` since `𝒦` is a homomorphism.
/// Much cheaper than iterating the 3-dimensional map directly.
pub fn klein_degree_sequence(phi: &RationalMap, window: usize) -> Result<DegreeSequence> {
    let mut degrees = Vec::with_capacity(window);
    let mut it = phi.clone();
    for k in 0..window {
        degrees.push(klein_embed(&it)?.degree());
        if k + 1 < window {
            it = it.compose(phi)?;
        }
    }
    Ok(DegreeSequence { degrees, window })
}

/// Compares the growth class of a plane map with that of its Klein embedding.
pub fn same_order_check(phi: &RationalMap, window: usize) -> Result<SameOrder> {
    let plane = degree_sequence(phi, window)?;
    let klein = klein_degree_sequence(phi, window)?;
    let plane_class = classify_growth(&plane)?;
    let klein_class = classify_growth(&klein)?;
    Ok(SameOrder {
        same: plane_class.verdict == klein_class.verdict,
        plane,
        klein,
        plane_class,
        klein_class,
    })
}

/// One row of the comparison `deg φⁿ ≤ deg 𝒦(φ)ⁿ ≤ bound(φⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinBoundRow {
    pub n: usize,
    pub plane_degree: u32,
    pub klein_degree: u32,
    pub bound: u32,
}

impl KleinBoundRow {
    pub fn holds(&self) -> bool {
        self.plane_degree <= self.klein_degree && self.klein_degree <= self.bound
    }
}

/// `max(4q₂+p₂+1, 2p₁+2q₁+q₂+1, p₂+3q₁+p₁+1)` where `pᵢ`, `qᵢ` are the
/// degrees of numerator and denominator of the plane components.
pub fn klein_degree_bound(phi: &RationalMap) -> Result<u32> {
    let (a, b) = phi.plane_components()?;
    let (p1, q1) = (a.num().total_degree(), a.den().total_degree());
    let (p2, q2) = (b.num().total_degree(), b.den().total_degree());
    Ok((4 * q2 + p2 + 1)
        .max(2 * p1 + 2 * q1 + q2 + 1)
        .max(p2 + 3 * q1 + p1 + 1))
}

/// Term-by-term comparison of the plane and Klein degree sequences with the
/// explicit bound, iterating `φ` and `𝒦(φ)` independently.
pub fn klein_bound_table(phi: &RationalMap, window: usize) -> Result<Vec<KleinBoundRow>> {
    let k = klein_embed(phi)?;
    let mut rows = Vec::with_capacity(window);
    let (mut p, mut kk) = (phi.clone(), k.clone());
    for n in 1..=window {
        rows.push(KleinBoundRow {
            n,
            plane_degree: p.degree(),
            klein_degree: kk.degree(),
            bound: klein_degree_bound(&p)?,
        });
        if n < window {
            p = p.compose(phi)?;
            kk = kk.compose(&k)?;
        }
    }
    Ok(rows)
}
