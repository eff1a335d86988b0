//! Rational self-maps of the plane and of 3-space.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::{gcd, lcm, MultiPoly, RatFunc, NVARS, Q};
use crate::chart::{Chart, PlaneVars};
use crate::error::{Error, Result};

/// Tuple of rational functions acting on the coordinates of a chart.
///
/// Component `i` is the image of the `i`-th chart variable (see
/// [`Chart::vars`]). Homogeneous maps are kept with polynomial components
/// of one common degree, without common factor, scaled to coprime integer
/// coefficients and a positive leading coefficient in the last nonzero slot.
#[derive(Clone, Debug)]
pub struct RationalMap {
    chart: Chart,
    components: Vec<RatFunc>,
    name: Option<String>,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.components == other.components
    }
}

impl Eq for RationalMap {}

impl RationalMap {
    pub fn new(chart: Chart, components: Vec<RatFunc>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Arity(format!(
                "chart {chart} needs {} components, got {}",
                chart.dim(),
                components.len()
            )));
        }
        let mask = chart.mask();
        for c in &components {
            if c.var_mask() & !mask != 0 {
                return Err(Error::Arity(format!(
                    "component {c} uses a variable outside chart {chart}"
                )));
            }
        }
        if chart == Chart::Homogeneous {
            let polys = components
                .iter()
                .map(|c| {
                    if c.is_polynomial() {
                        Ok(c.num().clone())
                    } else {
                        Err(Error::Arity("homogeneous components must be polynomials".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::homogeneous(polys);
        }
        Ok(RationalMap {
            chart,
            components,
            name: None,
        })
    }

    /// Builds a homogeneous map, removing common factors and fixing the scale.
    pub fn homogeneous(polys: Vec<MultiPoly>) -> Result<Self> {
        if polys.len() != 4 {
            return Err(Error::Arity("homogeneous maps have four components".into()));
        }
        if polys.iter().all(MultiPoly::is_zero) {
            return Err(Error::IndeterminateComposition);
        }
        let degree = polys.iter().map(MultiPoly::total_degree).max().unwrap_or(0);
        for p in &polys {
            if !p.is_zero() && p.terms().iter().any(|(m, _)| m.degree() != degree) {
                return Err(Error::Arity(format!(
                    "component {p} is not homogeneous of degree {degree}"
                )));
            }
        }
        let polys = remove_common_factor(polys);
        Ok(RationalMap {
            chart: Chart::Homogeneous,
            components: polys.into_iter().map(RatFunc::from_poly).collect(),
            name: None,
        })
    }

    pub fn identity(chart: Chart) -> Self {
        RationalMap {
            chart,
            components: chart.vars().into_iter().map(RatFunc::var).collect(),
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RatFunc {
        &self.components[i]
    }

    /// Image of variable `z_var`; panics if `var` is not a chart coordinate.
    pub fn component_for_var(&self, var: usize) -> &RatFunc {
        let idx = self
            .chart
            .vars()
            .iter()
            .position(|&v| v == var)
            .expect("variable belongs to the chart");
        &self.components[idx]
    }

    /// Substitution table `z_v -> component` for use with
    /// [`RatFunc::substitute`].
    pub fn assignment(&self) -> [Option<RatFunc>; NVARS] {
        let mut a: [Option<RatFunc>; NVARS] = Default::default();
        for (v, c) in self.chart.vars().into_iter().zip(&self.components) {
            a[v] = Some(c.clone());
        }
        a
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.chart)
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(RatFunc::is_polynomial)
    }

    /// `r ∘ self`.
    pub fn pull(&self, r: &RatFunc) -> Result<RatFunc> {
        r.substitute(&self.assignment())
    }

    fn check_same_chart(&self, other: &RationalMap) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::Arity(format!(
                "cannot compose maps on charts {} and {}",
                self.chart, other.chart
            )));
        }
        Ok(())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalMap) -> Result<RationalMap> {
        self.check_same_chart(g)?;
        let a = g.assignment();
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&a))
            .collect::<Result<Vec<_>>>()?;
        if self.chart == Chart::Homogeneous {
            return Self::homogeneous(comps.into_iter().map(|c| c.num().clone()).collect());
        }
        Ok(RationalMap {
            chart: self.chart,
            components: comps,
            name: None,
        })
    }

    /// `n`-fold composition, reducing after every step.
    pub fn iterate(&self, n: usize) -> Result<RationalMap> {
        let mut acc = Self::identity(self.chart);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn jacobian_matrix(&self) -> Vec<Vec<RatFunc>> {
        let vars = self.chart.vars();
        self.components
            .iter()
            .map(|c| vars.iter().map(|&v| c.derive(v)).collect())
            .collect()
    }

    pub fn jacobian_det(&self) -> Result<RatFunc> {
        if self.chart == Chart::Homogeneous {
            return Err(Error::Arity("jacobian_det needs an affine or plane map".into()));
        }
        Ok(determinant(&self.jacobian_matrix()))
    }

    /// `g ∘ f = id` and `f ∘ g = id`.
    pub fn verify_inverse(&self, g: &RationalMap) -> Result<bool> {
        self.check_same_chart(g)?;
        Ok(g.compose(self)?.is_identity() && self.compose(g)?.is_identity())
    }

    /// Homogenization of a map on an affine chart `z_k = 1`.
    pub fn homogenize(&self) -> Result<RationalMap> {
        let k = match self.chart {
            Chart::Affine(k) => k as usize,
            Chart::Homogeneous => return Ok(self.clone()),
            Chart::Plane(_) => {
                return Err(Error::Arity("plane maps do not homogenize into P^3".into()))
            }
        };
        let (nums, hslot) = homogeneous_parts(&self.components, k);
        let mut polys = vec![MultiPoly::zero(); 4];
        for (v, p) in self.chart.vars().into_iter().zip(nums) {
            polys[v] = p;
        }
        polys[k] = hslot;
        Self::homogeneous(polys)
    }

    /// Restriction of a homogeneous map to the standard chart `z3 = 1`.
    pub fn dehomogenize(&self) -> Result<RationalMap> {
        if self.chart != Chart::Homogeneous {
            return Err(Error::Arity("dehomogenize needs a homogeneous map".into()));
        }
        let one = Q::one();
        let parts: Vec<MultiPoly> = self
            .components
            .iter()
            .map(|c| c.num().eval_var(3, &one))
            .collect();
        if parts[3].is_zero() {
            return Err(Error::IndeterminateComposition);
        }
        let comps = parts[..3]
            .iter()
            .map(|p| RatFunc::reduce(p.clone(), parts[3].clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMap {
            chart: Chart::AFFINE,
            components: comps,
            name: None,
        })
    }

    /// Common degree of the homogenized components.
    pub fn degree(&self) -> u32 {
        match self.chart {
            Chart::Homogeneous => self
                .components
                .iter()
                .map(|c| c.num().total_degree())
                .max()
                .unwrap_or(0),
            // Reduced components leave no common factor after clearing
            // denominators, so no gcd is needed.
            Chart::Affine(_) | Chart::Plane(_) => {
                let (nums, l) = cleared_parts(&self.components);
                nums.iter().chain(std::iter::once(&l)).map(MultiPoly::total_degree).max().unwrap_or(0)
            }
        }
    }

    /// The two plane components as `(first, second)`.
    pub fn plane_components(&self) -> Result<(&RatFunc, &RatFunc)> {
        match self.chart {
            Chart::Plane(_) => Ok((&self.components[0], &self.components[1])),
            _ => Err(Error::Arity("expected a plane map".into())),
        }
    }

    /// Re-expresses a plane map in the other variable pair.
    pub fn to_plane_vars(&self, target: PlaneVars) -> Result<RationalMap> {
        let Chart::Plane(current) = self.chart else {
            return Err(Error::Arity("expected a plane map".into()));
        };
        if current == target {
            return Ok(self.clone());
        }
        let perm = match target {
            PlaneVars::Z1Z2 => [1, 2, 0, 3],
            PlaneVars::Z0Z1 => [2, 0, 1, 3],
        };
        Ok(RationalMap {
            chart: Chart::Plane(target),
            components: self.components.iter().map(|c| c.rename(&perm)).collect(),
            name: self.name.clone(),
        })
    }

    /// Action on the hyperplane `z3 = 0` of a homogeneous map.
    pub fn hinfty_action<R: Rng>(&self, rng: &mut R) -> Result<HInftyAction> {
        if self.chart != Chart::Homogeneous {
            return Err(Error::Arity("hinfty_action needs a homogeneous map".into()));
        }
        let zero = Q::zero();
        let restricted: Vec<MultiPoly> = self
            .components
            .iter()
            .map(|c| c.num().eval_var(3, &zero))
            .collect();
        let pivot = restricted
            .iter()
            .position(|p| !p.is_zero())
            .ok_or_else(|| Error::Internal("z3 divides every component".into()))?;
        let fourth_vanishes = restricted[3].is_zero();
        let lp = restricted[pivot].leading_coeff();
        let proportional = restricted.iter().all(|p| {
            let c = p.leading_coeff() / &lp;
            *p == restricted[pivot].scale(&c)
        });
        if proportional {
            let point: Vec<Q> = restricted.iter().map(|p| p.leading_coeff() / &lp).collect();
            return Ok(HInftyAction {
                kind: HInftyKind::ContractedToPoint(point),
                into_hinfty: fourth_vanishes,
                sample_ranks: Vec::new(),
                restricted,
            });
        }
        let partials: Vec<Vec<MultiPoly>> = restricted
            .iter()
            .map(|p| (0..3).map(|v| p.derive(v)).collect())
            .collect();
        let mut ranks = Vec::new();
        let mut draws = 0;
        while ranks.len() < HINFTY_SAMPLES && draws < HINFTY_MAX_DRAWS {
            draws += 1;
            let point: [Q; NVARS] = [
                Q::from_integer(rng.gen_range(-40i64..=40).into()),
                Q::from_integer(rng.gen_range(-40i64..=40).into()),
                Q::from_integer(rng.gen_range(-40i64..=40).into()),
                Q::zero(),
            ];
            if restricted.iter().all(|p| p.eval(&point).is_zero()) {
                continue;
            }
            let m: Vec<Vec<Q>> = partials
                .iter()
                .map(|row| row.iter().map(|p| p.eval(&point)).collect())
                .collect();
            // Euler's identity puts the image point in the column span, so the
            // projective rank is one less than the affine one.
            ranks.push(matrix_rank(m).saturating_sub(1));
        }
        if ranks.is_empty() {
            return Err(Error::AllSamplesIndeterminate);
        }
        let rank = *ranks.iter().max().expect("nonempty");
        let kind = match rank {
            2 if fourth_vanishes => HInftyKind::Preserved,
            2 => HInftyKind::Moved,
            1 => HInftyKind::ContractedToCurve,
            _ => {
                return Err(Error::Internal(
                    "restriction to H_inf is not constant but every sample had rank 0".into(),
                ))
            }
        };
        Ok(HInftyAction {
            kind,
            into_hinfty: fourth_vanishes,
            sample_ranks: ranks,
            restricted,
        })
    }

    /// Squarefree part of the jacobian numerator: the candidate locus of
    /// contracted hypersurfaces.
    pub fn exceptional_candidates(&self) -> Result<Vec<MultiPoly>> {
        let j = self.jacobian_det()?;
        let mut out = Vec::new();
        for p in [j.num(), j.den()] {
            if p.is_constant() {
                continue;
            }
            let var = (0..NVARS).find(|&v| p.uses_var(v)).expect("non-constant");
            for (f, _) in crate::algebra::squarefree(p, var)?.factors {
                out.push(f);
            }
        }
        Ok(out)
    }
}

pub const HINFTY_SAMPLES: usize = 8;
const HINFTY_MAX_DRAWS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HInftyKind {
    Preserved,
    /// Image point in homogeneous coordinates, scaled so the first nonzero
    /// entry is 1.
    ContractedToPoint(Vec<Q>),
    ContractedToCurve,
    Moved,
}

/// What a homogeneous map does to the hyperplane `z3 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HInftyAction {
    pub kind: HInftyKind,
    /// The image lies inside `z3 = 0` (fourth component divisible by `z3`).
    pub into_hinfty: bool,
    /// Projective rank of the restriction at each accepted sample point.
    pub sample_ranks: Vec<usize>,
    /// Components with `z3 = 0` substituted.
    pub restricted: Vec<MultiPoly>,
}

impl HInftyAction {
    pub fn kind_tag(&self) -> String {
        match &self.kind {
            HInftyKind::Preserved => "preserved".into(),
            HInftyKind::ContractedToPoint(p) => {
                let coords: Vec<String> = p.iter().map(crate::algebra::fmt_rational).collect();
                format!("contracted_to_point({})", coords.join(":"))
            }
            HInftyKind::ContractedToCurve => "contracted_to_curve".into(),
            HInftyKind::Moved => "moved".into(),
        }
    }
}

fn determinant(m: &[Vec<RatFunc>]) -> RatFunc {
    match m.len() {
        0 => RatFunc::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = RatFunc::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<RatFunc>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

pub(crate) fn matrix_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let delta = &f * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Clears denominators of affine components and homogenizes with `hvar`.
/// Returns the homogenized numerators and the homogenizing slot.
fn cleared_parts(comps: &[RatFunc]) -> (Vec<MultiPoly>, MultiPoly) {
    let mut l = MultiPoly::one();
    for c in comps {
        l = lcm(&l, c.den());
    }
    let nums = comps
        .iter()
        .map(|c| c.num() * &l.div_exact(c.den()).expect("lcm is a multiple"))
        .collect();
    (nums, l)
}

fn homogeneous_parts(comps: &[RatFunc], hvar: usize) -> (Vec<MultiPoly>, MultiPoly) {
    let (nums, l) = cleared_parts(comps);
    let d = nums
        .iter()
        .chain(std::iter::once(&l))
        .map(MultiPoly::total_degree)
        .max()
        .unwrap_or(0);
    let hom = |p: &MultiPoly| {
        MultiPoly::from_terms(p.terms().iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.0[hvar] += d - m.degree();
            (m2, c.clone())
        }))
    };
    (nums.iter().map(hom).collect(), hom(&l))
}

fn remove_common_factor(polys: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut g = MultiPoly::zero();
    let mut order: Vec<&MultiPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    order.sort_by_key(|p| p.len());
    for p in order {
        g = gcd(&g, p);
        if g.is_constant() {
            break;
        }
    }
    let polys: Vec<MultiPoly> = if g.is_constant() {
        polys
    } else {
        polys
            .iter()
            .map(|p| p.div_exact(&g).expect("gcd divides"))
            .collect()
    };
    // Overall scale: coprime integer coefficients, last nonzero slot positive.
    let mut content = Q::zero();
    for p in &polys {
        for (_, c) in p.terms() {
            content = if content.is_zero() {
                c.clone()
            } else {
                rational_gcd(&content, c)
            };
        }
    }
    let last = polys.iter().rev().find(|p| !p.is_zero()).expect("some nonzero");
    if last.leading_coeff() < Q::zero() {
        content = -content;
    }
    let inv = content.recip();
    polys.iter().map(|p| p.scale(&inv)).collect()
}

fn rational_gcd(a: &Q, b: &Q) -> Q {
    use num_integer::Integer;
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    Q::new(n, d)
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.chart == Chart::Homogeneous { " : " } else { ", " };
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(sep))
    }
}
