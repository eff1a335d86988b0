//! Named examples with expected values, and their plain-text file format.
//!
//! A catalog file is a sequence of blank-line separated blocks:
//!
//! ```text
//! # comment
//! NAME: legendre
//! CHART: z3
//! MAP: (z1, z0, -z0*z1 - z2)
//! EXPECTED.V: -1
//! EXPECTED.ORDER: 2
//! NOTES: free text, may repeat
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{MultiPoly, Q};
use crate::chart::{Chart, PlaneVars};
use crate::contact::{alpha_of, chart_multiplier, contraction_multiplicity, multiplier, regular_at_infinity};
use crate::dynamics::{classify_growth, degree_sequence, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::exactness::{order_of, sigma_lift, sigma_lift_contact, LiftResult};
use crate::families::*;
use crate::forms::theta_affine;
use crate::maps::RationalMap;
use crate::parse::{parse_form, parse_map, parse_ratfunc};

/// Search bound used when checking `EXPECTED.ORDER`.
pub const ORDER_BOUND: usize = 24;

/// An expected-value slot. Plane maps read `V` as the jacobian determinant
/// (their `η` multiplier).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    V,
    Alpha,
    Order,
    Regular,
    Hinfty,
    Exact,
    Witness,
    Lift,
    LiftContact,
    Multiplicity,
    Klein,
    Degrees,
    Growth,
    ThetaPullback,
}

impl Field {
    pub const ALL: [Field; 14] = [
        Field::V,
        Field::Alpha,
        Field::Order,
        Field::Regular,
        Field::Hinfty,
        Field::Exact,
        Field::Witness,
        Field::Lift,
        Field::LiftContact,
        Field::Multiplicity,
        Field::Klein,
        Field::Degrees,
        Field::Growth,
        Field::ThetaPullback,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Field::V => "V",
            Field::Alpha => "ALPHA",
            Field::Order => "ORDER",
            Field::Regular => "REGULAR",
            Field::Hinfty => "HINFTY",
            Field::Exact => "EXACT",
            Field::Witness => "WITNESS",
            Field::Lift => "LIFT",
            Field::LiftContact => "LIFT_CONTACT",
            Field::Multiplicity => "MULTIPLICITY",
            Field::Klein => "KLEIN",
            Field::Degrees => "DEGREES",
            Field::Growth => "GROWTH",
            Field::ThetaPullback => "THETA_PULLBACK",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Field {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Field::ALL.into_iter().find(|f| f.tag() == s).ok_or(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub map: RationalMap,
    pub expected: BTreeMap<Field, String>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn new(name: impl Into<String>, map: RationalMap) -> Self {
        let name = name.into();
        CatalogEntry {
            map: map.with_name(name.clone()),
            name,
            expected: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn expect(mut self, field: Field, value: impl Into<String>) -> Self {
        self.expected.insert(field, value.into());
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn expected(&self, field: Field) -> Option<&str> {
        self.expected.get(&field).map(String::as_str)
    }

    /// 3-dimensional maps of the standard chart, the ones the `ω` sweeps use.
    pub fn is_standard_contact_candidate(&self) -> bool {
        self.map.chart() == Chart::AFFINE
    }

    pub fn is_plane(&self) -> bool {
        matches!(self.map.chart(), Chart::Plane(_))
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qs(v: [i64; 9]) -> [Q; 9] {
    v.map(q)
}

fn m(text: &str) -> RationalMap {
    parse_map(text, PlaneVars::Z0Z1).expect("registry map parses")
}

fn r(text: &str) -> crate::algebra::RatFunc {
    parse_ratfunc(text).expect("registry function parses")
}

/// The built-in example corpus.
pub fn registry() -> Vec<CatalogEntry> {
    use Field::*;
    let ok = |x: Result<RationalMap>| x.expect("registry constructor");
    let mut out = vec![
        CatalogEntry::new("legendre", legendre_involution())
            .expect(V, "-1")
            .expect(Alpha, "0")
            .expect(Order, "2")
            .expect(Regular, "false")
            .expect(Hinfty, "contracted_to_point(0:0:1:0)"),
        CatalogEntry::new("plane:cremona", cremona())
            .expect(Klein, "(z0*z1^2/z2^2, 1/z1, 1/z2)")
            .expect(Order, "2"),
        CatalogEntry::new("klein:cremona", ok(klein_embed(&cremona())))
            .expect(V, "-1/z2^2")
            .expect(Alpha, "infinity")
            .expect(Order, "2")
            .expect(Regular, "false"),
        CatalogEntry::new("plane:lyness", lyness())
            .expect(Klein, "((-z0*z1 - z2 - 1)/(z0*z1^2), z2, (z2 + 1)/z1)")
            .expect(Order, "5")
            .expect(Degrees, "2,2,2,2,1,2")
            .expect(Growth, "bounded"),
        CatalogEntry::new("lyness5", ok(klein_embed(&lyness())))
            .expect(Alpha, "infinity")
            .expect(Order, "5")
            .expect(Regular, "false")
            .expect(Degrees, "4,5,6,4,1,4")
            .expect(Growth, "bounded"),
        CatalogEntry::new("plane:henon", henon())
            .expect(Degrees, "2,4,8,16,32")
            .expect(Growth, "exponential_like"),
        CatalogEntry::new("klein:henon", ok(klein_embed(&henon())))
            .expect(Alpha, "infinity")
            .expect(Regular, "false")
            .expect(Degrees, "3,6,12,24"),
        CatalogEntry::new("sansfib", m("(z0/(1+z2)^2, z1, z2/(1+z2))"))
            .expect(V, "1/(z2^2 + 2*z2 + 1)")
            .expect(Alpha, "infinity")
            .expect(Regular, "false")
            .note("contact but does not preserve the fibration by the z2 = const planes"),
    ];
    for n in 0..4i64 {
        out.push(
            CatalogEntry::new(format!("nfamily:{n}"), ok(v_example(n)))
                .expect(V, nfamily_v(n))
                .expect(Multiplicity, "z2:0"),
        );
    }
    for n in 0..4i64 {
        out.push(
            CatalogEntry::new(format!("contraction:{n}"), ok(contraction_example(n)))
                .expect(V, contraction_v(n))
                .expect(Multiplicity, format!("z2:{}", if n >= 2 { n } else { 0 }))
                .note("V = z1*z2^n/(z2 + (1 - n)*z0*z1); the z2 factor cancels for n = 1"),
        );
    }
    out.extend([
        CatalogEntry::new("vexample:square", m("((z1-z0)^2/(2*z0*z1+2*z2-z0^2), (2*z2+z0^2)/(z1-z0), z1-z0)"))
            .expect(V, "(2*z0 - 2*z1)/(z0^2 - 2*z0*z1 - 2*z2)"),
        CatalogEntry::new("alpha:linear", m("(z0/5, z0 + 5*z1, z2 - z0^2/10)"))
            .expect(V, "1")
            .expect(Alpha, "5"),
        CatalogEntry::new("alpha:quadratic", m("(z0, z1 + z0^2, z2 - 2*z0^3/3)"))
            .expect(V, "1")
            .expect(Alpha, "1/(2*z0)"),
        CatalogEntry::new("alpha:cubic", m("(-z1, z0 + z1^2, z2 + z0*z1 + 2*z1^3/3)"))
            .expect(V, "1")
            .expect(Alpha, "2*z1"),
        CatalogEntry::new("aut:2:3", ok(aut_p3_contact(&q(2), &q(3), &q(0), &q(0), &q(0))))
            .expect(V, "6")
            .expect(Regular, "true")
            .expect(Hinfty, "preserved"),
        CatalogEntry::new("aut:-1:2:1:3:-2", ok(aut_p3_contact(&q(-1), &q(2), &q(1), &q(3), &q(-2))))
            .expect(V, "-2")
            .expect(Regular, "true")
            .expect(Hinfty, "preserved"),
        CatalogEntry::new("eclate", m("chart=z2 (z0, z0*z1 - z3, z0*z3)"))
            .expect(V, "1/z0")
            .note("chart z2 = 1; analysis-limited: only the chart multiplier identity (phi^n)*omega = z0^-n*omega is asserted"),
    ]);
    for (a, b, c, d) in [(1, 1, 1, 2), (2, 1, 1, 3), (0, 1, -1, 0)] {
        out.push(
            CatalogEntry::new(format!("pgl2:{a}:{b}:{c}:{d}"), ok(pgl2(&q(a), &q(b), &q(c), &q(d))))
                .expect(V, "1")
                .expect(Regular, "false"),
        );
    }
    for f in ["1/z1", "z1/(z1^2 + 1)"] {
        out.push(
            CatalogEntry::new(format!("kernel:{f}"), ok(kernel_family(&r(f))))
                .expect(V, "1")
                .note("open-question probe: regularity is reported, not asserted"),
        );
    }
    let (mon1, _) = monomial_eta(2, &q(1), MonomialType::First).expect("monomial");
    let (mon2, _) = monomial_eta(0, &q(1), MonomialType::Second).expect("monomial");
    let quad = quadratic_tau(&qs([1, 0, 0, 0, 0, 1, 0, 1, 0]), &qs([1, 0, 0, 0, 0, 1, 0, 1, 0])).expect("quadexact");
    out.extend([
        CatalogEntry::new("plane:mon1:2", mon1)
            .expect(V, "1")
            .expect(Exact, "true")
            .expect(Lift, "(z0^2*z1, 1/z0, z0*z1 + z2)")
            .note("lift term is +(p - 1)*z0*z1, verified by pullback"),
        CatalogEntry::new("plane:mon2:0", mon2)
            .expect(V, "1")
            .expect(Order, "4")
            .expect(Exact, "true")
            .expect(Lift, "(z1, -z0, z0*z1 + z2)"),
        CatalogEntry::new("plane:inv", m("(-z0 + 1/(z1^2 - 1), -z1)"))
            .expect(V, "1")
            .expect(Order, "2")
            .expect(Exact, "false")
            .expect(Witness, "z1:1/(z1^2 - 1)")
            .note("the surviving logarithmic part is +1/(z1^2 - 1) for the form z0*dz1 - phi0*dphi1; its negative belongs to the opposite orientation"),
        CatalogEntry::new("plane:quadexact", quad)
            .expect(V, "1")
            .expect(Exact, "false")
            .expect(Witness, "z1:-1/z1"),
        CatalogEntry::new("plane:jonq-exact", m("(z0 + z1, z1)"))
            .expect(Exact, "true")
            .expect(Lift, "(z0 + z1, z1, -1/2*z1^2 + z2)"),
        CatalogEntry::new(
            "plane:jonq-inexact",
            jonquieres_eta(&q(1), &q(0), &q(0), &q(1), &r("1/(z1^2 - 1)")).expect("jonquieres"),
        )
        .expect(V, "1")
        .expect(Exact, "false")
        .expect(Witness, "z1:-1/(z1^2 - 1)"),
        CatalogEntry::new("plane:lambda:t", lambda_family(&r("z0")).expect("lambda"))
            .expect(Exact, "true")
            .expect(Lift, "(z0^2*z1, 1/z0, z0*z1 + z2)")
            .note("sign convention: b = +z0*z1, the opposite sign does not preserve omega"),
        CatalogEntry::new("plane:lambda:t-1", lambda_family(&r("z0 - 1")).expect("lambda"))
            .expect(Exact, "false"),
        CatalogEntry::new("plane:centralizer:4", m("(z0 + z1^4, z1)"))
            .expect(Exact, "true")
            .expect(Lift, "(z0 + z1^4, z1, -1/5*z1^5 + z2)"),
        CatalogEntry::new("plane:henon-poly", m("(z1 + z0^2, -z0)"))
            .expect(LiftContact, "(z0^2 + z1, -z0, 1/3*z0^3 + z0*z1 + z2)"),
        CatalogEntry::new("plane:shift-centralizer", m("(z1, z1^4 - z0)"))
            .expect(LiftContact, "(z1, z1^4 - z0, -4/5*z1^5 + z0*z1 + z2)")
            .note("the z1^5 coefficient is -k/(k+1) with k = 4, checked by pullback"),
        CatalogEntry::new("klein:jonq3", ok(klein_embed(&m("(z1, z2 + z1^3)"))))
            .expect(Alpha, "infinity")
            .expect(Regular, "false")
            .expect(Hinfty, "contracted_to_point(0:0:1:0)")
            .note("image point printed with coordinates indexed from z0; it is the third basis point"),
        CatalogEntry::new("klein:curve", ok(klein_embed(&m("(z1/z2, 1/z2)"))))
            .expect(Alpha, "infinity")
            .expect(Regular, "false")
            .expect(Hinfty, "contracted_to_curve"),
        CatalogEntry::new("klein:monomial", ok(klein_embed(&m("(z1^2*z2, z1*z2)"))))
            .expect(Alpha, "infinity")
            .expect(Regular, "false"),
        CatalogEntry::new("legendre:lyness", ok(legendre_family(&lyness())))
            .expect(Alpha, "0")
            .expect(Regular, "false"),
        CatalogEntry::new("legendre:henon", ok(legendre_family(&henon())))
            .expect(Alpha, "0")
            .expect(Regular, "false"),
        CatalogEntry::new("theta-conjugation", crate::forms::theta_conjugation())
            .expect(ThetaPullback, "z0*dz1 + dz2")
            .note("(z0/2, z1, -z2 + z0*z1/2) pulls the restricted form back to -z1*dz0 + dz2; the sign of the z0*z1 term is flipped here"),
    ]);
    out
}

fn scaled(c: i64, term: &str) -> String {
    if c == 1 {
        term.to_string()
    } else {
        format!("{c}*{term}")
    }
}

/// `z0/((n+1) z0 z1 + (n+1) z0 + n z2)`.
fn nfamily_v(n: i64) -> String {
    let mut den = format!("{} + {}", scaled(n + 1, "z0*z1"), scaled(n + 1, "z0"));
    if n != 0 {
        den = format!("{den} + {}", scaled(n, "z2"));
    }
    format!("z0/({den})")
}

fn contraction_v(n: i64) -> String {
    let num = match n {
        0 => "z1".to_string(),
        1 => "z1*z2".to_string(),
        _ => format!("z1*z2^{n}"),
    };
    let c = 1 - n;
    let den = match c {
        0 => "z2".to_string(),
        1 => "z2 + z0*z1".to_string(),
        _ => format!("z2 + ({c})*z0*z1"),
    };
    format!("({num})/({den})")
}

/// Entry by name, from `entries` or else from the built-in registry.
pub fn lookup_in(entries: &[CatalogEntry], name: &str) -> Result<CatalogEntry> {
    entries
        .iter()
        .find(|e| e.name == name)
        .cloned()
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    lookup_in(&registry(), name)
}

fn fmt_error(line: usize, message: impl Into<String>) -> Error {
    Error::CatalogFormat {
        line,
        message: message.into(),
    }
}

/// Parses a catalog file.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str, &str)> = Vec::new();
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    for (no, line) in lines.chain(std::iter::once((0, ""))) {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !block.is_empty() {
                out.push(parse_block(&block)?);
                block.clear();
            }
            continue;
        }
        let (k, v) = t
            .split_once(':')
            .ok_or_else(|| fmt_error(no, format!("expected 'KEY: value', found '{t}'")))?;
        block.push((no, k.trim(), v.trim()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &out {
        if !seen.insert(e.name.clone()) {
            return Err(fmt_error(0, format!("duplicate entry '{}'", e.name)));
        }
    }
    Ok(out)
}

fn parse_block(block: &[(usize, &str, &str)]) -> Result<CatalogEntry> {
    let first = block[0].0;
    let mut name = None;
    let mut chart = None;
    let mut map_text = None;
    let mut expected = BTreeMap::new();
    let mut notes = Vec::new();
    for &(no, k, v) in block {
        match k {
            "NAME" => name = Some(v.to_string()),
            "CHART" => {
                chart = Some(Chart::from_tag(v).ok_or_else(|| fmt_error(no, format!("unknown chart '{v}'")))?)
            }
            "MAP" => map_text = Some((no, v)),
            "NOTES" => notes.push(v.to_string()),
            _ => {
                let field = k
                    .strip_prefix("EXPECTED.")
                    .and_then(|f| f.parse::<Field>().ok())
                    .ok_or_else(|| fmt_error(no, format!("unknown key '{k}'")))?;
                if expected.insert(field, v.to_string()).is_some() {
                    return Err(fmt_error(no, format!("repeated key '{k}'")));
                }
            }
        }
    }
    let name = name.ok_or_else(|| fmt_error(first, "block without NAME"))?;
    let (no, text) = map_text.ok_or_else(|| fmt_error(first, format!("entry '{name}' has no MAP")))?;
    let full = match chart {
        Some(c) => format!("chart={} {text}", c.tag()),
        None => text.to_string(),
    };
    let map = parse_map(&full, PlaneVars::Z0Z1).map_err(|e| fmt_error(no, e.to_string()))?;
    Ok(CatalogEntry {
        map: map.with_name(name.clone()),
        name,
        expected,
        notes,
    })
}

/// Serializes entries in the catalog format; `parse_catalog` inverts it.
pub fn serialize_catalog(entries: &[CatalogEntry]) -> String {
    let mut s = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        s.push_str(&format!("NAME: {}\nCHART: {}\nMAP: {}\n", e.name, e.map.chart().tag(), e.map));
        for (f, v) in &e.expected {
            s.push_str(&format!("EXPECTED.{f}: {v}\n"));
        }
        for n in &e.notes {
            s.push_str(&format!("NOTES: {n}\n"));
        }
    }
    s
}

/// Outcome of checking one expected field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCheck {
    pub field: Field,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

/// Canonical form of an expected value, so hand-written files compare
/// exactly against computed strings.
fn canonical_expected(field: Field, v: &str, chart: Chart) -> Result<String> {
    Ok(match field {
        Field::V | Field::Alpha if v != "infinity" => parse_ratfunc(v)?.to_string(),
        Field::Klein | Field::Lift | Field::LiftContact => parse_map(v, PlaneVars::Z0Z1)?.to_string(),
        Field::Witness => match v.split_once(':') {
            Some((stage, w)) => format!("{}:{}", stage.trim(), parse_ratfunc(w)?),
            None => v.to_string(),
        },
        Field::Multiplicity => match v.rsplit_once(':') {
            Some((f, n)) => format!("{}:{}", parse_ratfunc(f)?, n.trim()),
            None => v.to_string(),
        },
        Field::ThetaPullback => parse_form(v, chart)?.to_string(),
        Field::Degrees => v.split(',').map(str::trim).collect::<Vec<_>>().join(","),
        _ => v.trim().to_string(),
    })
}

fn plane01(phi: &RationalMap) -> Result<RationalMap> {
    phi.to_plane_vars(PlaneVars::Z0Z1)
}

/// Recomputes one field for `map`.
pub fn compute_field(field: Field, map: &RationalMap, expected: &str, seed: u64) -> Result<String> {
    let plane = matches!(map.chart(), Chart::Plane(_));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match field {
        Field::V if plane => map.jacobian_det()?.to_string(),
        Field::V if map.chart() == Chart::AFFINE => multiplier(map)?.to_string(),
        Field::V => chart_multiplier(map)?.to_string(),
        Field::Alpha => alpha_of(map)?.to_string(),
        Field::Order => match order_of(map, ORDER_BOUND)? {
            Some(k) => k.to_string(),
            None => "none".into(),
        },
        Field::Regular => regular_at_infinity(map, &mut rng)?.regular.to_string(),
        Field::Hinfty => regular_at_infinity(map, &mut rng)?.hinfty.kind_tag(),
        Field::Exact => matches!(sigma_lift(&plane01(map)?)?, LiftResult::Lifted { .. }).to_string(),
        Field::Witness => match sigma_lift(&plane01(map)?)? {
            LiftResult::Obstructed { witness, stage } => format!("{stage}:{witness}"),
            LiftResult::Lifted { .. } => "none".into(),
        },
        Field::Lift => match sigma_lift(&plane01(map)?)? {
            LiftResult::Lifted { map, .. } => map.to_string(),
            LiftResult::Obstructed { .. } => "none".into(),
        },
        Field::LiftContact => sigma_lift_contact(&plane01(map)?)?.0.to_string(),
        Field::Multiplicity => {
            let (f, _) = expected
                .rsplit_once(':')
                .ok_or_else(|| Error::Arity("MULTIPLICITY needs 'f:n'".into()))?;
            let f = parse_ratfunc(f)?;
            let poly: MultiPoly = f
                .is_polynomial()
                .then(|| f.num().clone())
                .ok_or_else(|| Error::InvalidDivisor(f.to_string()))?;
            format!("{f}:{}", contraction_multiplicity(map, &poly)?)
        }
        Field::Klein => klein_embed(map)?.to_string(),
        Field::Degrees => {
            let n = expected.split(',').count();
            degree_sequence(map, n)?.to_string()
        }
        Field::Growth => classify_growth(&degree_sequence(map, DEFAULT_WINDOW)?)?.verdict.to_string(),
        Field::ThetaPullback => theta_affine().pullback(map)?.to_string(),
    })
}

/// Checks every expected field of `entry` against recomputation.
pub fn validate(entry: &CatalogEntry, seed: u64) -> Vec<FieldCheck> {
    entry
        .expected
        .iter()
        .map(|(&field, raw)| {
            let expected = canonical_expected(field, raw, entry.map.chart()).unwrap_or_else(|_| raw.clone());
            let actual = compute_field(field, &entry.map, &expected, seed).unwrap_or_else(|e| format!("error: {e}"));
            FieldCheck {
                field,
                ok: actual == expected,
                expected,
                actual,
            }
        })
        .collect()
}
