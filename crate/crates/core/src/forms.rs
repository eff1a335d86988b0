//! Rational differential forms of degree at most 3.

use std::collections::BTreeMap;
use std::fmt;


use crate::algebra::{RatFunc, NVARS, Q};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::maps::RationalMap;

const MAX_DEGREE: u32 = 3;

/// Form `Σ c_I dz_I` where each basis element `dz_I` is a wedge of distinct
/// differentials with increasing indices, encoded as a bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    chart: Chart,
    degree: u32,
    terms: BTreeMap<u8, RatFunc>,
}

/// Sign of `dz_a ∧ dz_b` relative to the sorted basis element `a | b`, or
/// `None` if they overlap.
fn wedge_sign(a: u8, b: u8) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    for j in 0..NVARS {
        if b & (1 << j) != 0 {
            swaps += (a >> (j + 1)).count_ones();
        }
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

fn basis_indices(mask: u8) -> Vec<usize> {
    (0..NVARS).filter(|i| mask & (1 << i) != 0).collect()
}

impl DiffForm {
    pub fn zero(chart: Chart, degree: u32) -> Self {
        DiffForm {
            chart,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form.
    pub fn function(chart: Chart, f: RatFunc) -> Result<Self> {
        Self::from_terms(chart, 0, vec![(0, f)])
    }

    /// `dz_i`.
    pub fn dz(chart: Chart, i: usize) -> Result<Self> {
        Self::from_terms(chart, 1, vec![(1 << i, RatFunc::one())])
    }

    /// Builds `Σ c_I dz_I` from bitmask-keyed terms, validating degrees and
    /// chart membership.
    pub fn from_terms(chart: Chart, degree: u32, terms: Vec<(u8, RatFunc)>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow);
        }
        let mask = chart.mask();
        let mut out = Self::zero(chart, degree);
        for (basis, c) in terms {
            if basis.count_ones() != degree {
                return Err(Error::Arity(format!("basis element of wrong degree in a {degree}-form")));
            }
            if basis & !mask != 0 || c.var_mask() & !mask != 0 {
                return Err(Error::Arity(format!("term uses a variable outside chart {chart}")));
            }
            out.add_term(basis, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, basis: u8, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(basis).or_insert_with(RatFunc::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&basis);
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `dz_{indices}`; indices must be strictly increasing.
    pub fn coefficient(&self, indices: &[usize]) -> RatFunc {
        let mask = indices.iter().fold(0u8, |m, &i| m | (1 << i));
        self.terms.get(&mask).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Terms as `(sorted indices, coefficient)` in lexicographic order.
    pub fn terms(&self) -> Vec<(Vec<usize>, RatFunc)> {
        let mut v: Vec<(Vec<usize>, RatFunc)> = self
            .terms
            .iter()
            .map(|(m, c)| (basis_indices(*m), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn check_chart(&self, other: &DiffForm) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::Arity(format!(
                "forms live on different charts ({} and {})",
                self.chart, other.chart
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::Arity("cannot add forms of different degrees".into()));
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, f: &RatFunc) -> DiffForm {
        let mut out = Self::zero(self.chart, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, c * f);
        }
        out
    }

    pub fn exterior_derivative(&self) -> Result<DiffForm> {
        if self.degree >= MAX_DEGREE {
            return Err(Error::DegreeOverflow);
        }
        let mut out = Self::zero(self.chart, self.degree + 1);
        for (b, c) in &self.terms {
            for v in self.chart.vars() {
                let bit = 1u8 << v;
                let Some(sign) = wedge_sign(bit, *b) else {
                    continue;
                };
                let dc = c.derive(v);
                if !dc.is_zero() {
                    out.add_term(bit | b, if sign > 0 { dc } else { -dc });
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_chart(other)?;
        if self.degree + other.degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow);
        }
        let mut out = Self::zero(self.chart, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(sign) = wedge_sign(*a, *b) {
                    let c = ca * cb;
                    out.add_term(a | b, if sign > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    /// Pairing of a 1-form with a vector field.
    pub fn contract(&self, x: &VectorField) -> Result<RatFunc> {
        if self.degree != 1 {
            return Err(Error::Arity("contraction needs a 1-form".into()));
        }
        if self.chart != x.chart {
            return Err(Error::Arity(format!(
                "form on chart {} paired with field on chart {}",
                self.chart, x.chart
            )));
        }
        let mut acc = RatFunc::zero();
        for (b, c) in &self.terms {
            let v = b.trailing_zeros() as usize;
            acc = &acc + &(c * x.component_for_var(v));
        }
        Ok(acc)
    }

    /// `φ*f`: coefficients composed with `φ`, differentials replaced by
    /// `dφ_i`.
    pub fn pullback(&self, phi: &RationalMap) -> Result<DiffForm> {
        if phi.chart() != self.chart {
            return Err(Error::Arity(format!(
                "map on chart {} cannot pull back a form on chart {}",
                phi.chart(),
                self.chart
            )));
        }
        let vars = self.chart.vars();
        let differentials: Vec<Option<DiffForm>> = (0..NVARS)
            .map(|v| {
                if !vars.contains(&v) {
                    return Ok(None);
                }
                let comp = phi.component_for_var(v);
                Self::function(self.chart, comp.clone())?
                    .exterior_derivative()
                    .map(Some)
            })
            .collect::<Result<_>>()?;
        let a = phi.assignment();
        let mut out = Self::zero(self.chart, self.degree);
        for (b, c) in &self.terms {
            let mut acc = Self::function(self.chart, c.substitute(&a)?)?;
            for i in basis_indices(*b) {
                acc = acc.wedge(differentials[i].as_ref().expect("chart variable"))?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Restriction of a homogeneous form to the chart `z_k = 1`.
    pub fn restrict_to_chart(&self, k: usize) -> Result<DiffForm> {
        if self.chart != Chart::Homogeneous {
            return Err(Error::Arity("restriction needs a homogeneous form".into()));
        }
        let mut a: [Option<RatFunc>; NVARS] = Default::default();
        a[k] = Some(RatFunc::one());
        let chart = Chart::Affine(k as u8);
        let mut out = Self::zero(chart, self.degree);
        for (b, c) in &self.terms {
            if b & (1 << k) == 0 {
                out.add_term(*b, c.substitute(&a)?);
            }
        }
        Ok(out)
    }

    /// The same coefficients read on another chart with the same variables.
    pub fn retag(&self, chart: Chart) -> Result<DiffForm> {
        Self::from_terms(chart, self.degree, self.terms.clone().into_iter().collect())
    }
}

fn basis_symbol(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| format!("dz{i}"))
        .collect::<Vec<_>>()
        .join("^")
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in terms.iter().enumerate() {
            let (neg, body) = if idx.is_empty() {
                (false, format!("({c})"))
            } else {
                let sym = basis_symbol(idx);
                let text = c.to_string();
                if c.is_one() {
                    (false, sym)
                } else if (-c).is_one() {
                    (true, sym)
                } else if c.is_polynomial() && c.num().len() == 1 {
                    match text.strip_prefix('-') {
                        Some(rest) => (true, format!("{rest}*{sym}")),
                        None => (false, format!("{text}*{sym}")),
                    }
                } else {
                    (false, format!("({text})*{sym}"))
                }
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

/// Vector field with one component per chart variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    components: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(chart: Chart, components: Vec<RatFunc>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Arity(format!(
                "vector field on chart {chart} needs {} components",
                chart.dim()
            )));
        }
        Ok(VectorField { chart, components })
    }

    /// `∂/∂z_i`.
    pub fn coordinate(chart: Chart, i: usize) -> Result<Self> {
        let vars = chart.vars();
        if !vars.contains(&i) {
            return Err(Error::Arity(format!("z{i} is not a coordinate of chart {chart}")));
        }
        let comps = vars
            .iter()
            .map(|&v| if v == i { RatFunc::one() } else { RatFunc::zero() })
            .collect();
        Self::new(chart, comps)
    }

    /// The Reeb field `∂/∂z2` of `ω`.
    pub fn reeb() -> Self {
        Self::coordinate(Chart::AFFINE, 2).expect("z2 is an affine coordinate")
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn component_for_var(&self, v: usize) -> &RatFunc {
        let idx = self
            .chart
            .vars()
            .iter()
            .position(|&x| x == v)
            .expect("variable belongs to the chart");
        &self.components[idx]
    }

    /// `X(f) = df(X)`.
    pub fn apply(&self, f: &RatFunc) -> Result<RatFunc> {
        DiffForm::function(self.chart, f.clone())?
            .exterior_derivative()?
            .contract(self)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn z(i: usize) -> RatFunc {
    RatFunc::var(i)
}

/// `ω = z0 dz1 + dz2` on the standard chart.
pub fn omega() -> DiffForm {
    DiffForm::from_terms(Chart::AFFINE, 1, vec![(1 << 1, z(0)), (1 << 2, RatFunc::one())])
        .expect("valid form")
}

/// `η = dω = dz0 ∧ dz1` on the `(z0, z1)` plane.
pub fn eta() -> DiffForm {
    DiffForm::from_terms(Chart::PLANE01, 2, vec![(0b0011, RatFunc::one())]).expect("valid form")
}

/// `ω̄ = z0 z3 dz1 + z3² dz2 − (z0 z1 + z2 z3) dz3`.
pub fn omega_bar() -> DiffForm {
    let c3 = -(&(&z(0) * &z(1)) + &(&z(2) * &z(3)));
    DiffForm::from_terms(
        Chart::Homogeneous,
        1,
        vec![(1 << 1, &z(0) * &z(3)), (1 << 2, &z(3) * &z(3)), (1 << 3, c3)],
    )
    .expect("valid form")
}

/// `ϑ̃ = z0 dz1 − z1 dz0 + z2 dz3 − z3 dz2`.
pub fn theta_tilde() -> DiffForm {
    DiffForm::from_terms(
        Chart::Homogeneous,
        1,
        vec![(1 << 0, -z(1)), (1 << 1, z(0)), (1 << 2, -z(3)), (1 << 3, z(2))],
    )
    .expect("valid form")
}

/// `ω` written on the chart `z_k = 1`, i.e. `ω̄ / z3³` restricted there.
/// For `k = 3` this is [`omega`].
pub fn omega_in_chart(k: usize) -> Result<DiffForm> {
    if k == 3 {
        return Ok(omega());
    }
    let restricted = omega_bar().restrict_to_chart(k)?;
    let z3 = z(3);
    Ok(restricted.scale(&(&RatFunc::one() / &z3.pow(3)?)))
}

/// `ϑ̃` on the chart `z3 = 1`: `z0 dz1 − z1 dz0 − dz2`.
pub fn theta_affine() -> DiffForm {
    theta_tilde().restrict_to_chart(3).expect("chart z3 exists")
}

/// The linear map `ψ = (z0/2, z1, −z2 − z0 z1/2)` with `ψ*ϑ̃|z3=1 = ω`.
///
/// The variant with `+z0 z1/2` in the last slot does not satisfy this
/// identity (its pullback of `ϑ̃|z3=1` is `−z1 dz0 + dz2`).
pub fn theta_conjugation() -> RationalMap {
    let half = RatFunc::constant(Q::new(1.into(), 2.into()));
    RationalMap::new(
        Chart::AFFINE,
        vec![&z(0) * &half, z(1), &(-z(2)) - &(&(&z(0) * &z(1)) * &half)],
    )
    .expect("valid map")
    .with_name("theta-conjugation")
}
