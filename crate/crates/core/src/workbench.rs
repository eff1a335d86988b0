//! Command dispatch and report rendering behind the command-line tool.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{MultiPoly, RatFunc, NVARS, Q};
use crate::catalog::{lookup_in, registry, validate, CatalogEntry};
use crate::chart::{Chart, PlaneVars};
use crate::contact::{analyze, alpha_of, cocycle_check, contraction_multiplicity, multiplier, regular_at_infinity};
use crate::dynamics::{classify_growth, degree_sequence, klein_bound_table, klein_degree_sequence, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::exactness::{exactness_test, lift_form, finite_order_lift, sigma_lift, sigma_lift_contact, ExactnessResult, LiftResult};
use crate::families::{klein_embed, legendre_family, legendre_involution};
use crate::maps::RationalMap;
use crate::parse::{looks_like_form, parse_form, parse_int, parse_map, parse_ratfunc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Analyze,
    Alpha,
    V,
    Klein,
    Legendre,
    Lift,
    LiftContact,
    FiniteOrderLift,
    Exactness,
    Regular,
    Multiplicity,
    Iterate,
    Degrees,
    Cocycle,
    InverseCheck,
    Catalog,
    Selftest,
}

impl Verb {
    pub const ALL: [Verb; 17] = [
        Verb::Analyze,
        Verb::Alpha,
        Verb::V,
        Verb::Klein,
        Verb::Legendre,
        Verb::Lift,
        Verb::LiftContact,
        Verb::FiniteOrderLift,
        Verb::Exactness,
        Verb::Regular,
        Verb::Multiplicity,
        Verb::Iterate,
        Verb::Degrees,
        Verb::Cocycle,
        Verb::InverseCheck,
        Verb::Catalog,
        Verb::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Analyze => "analyze",
            Verb::Alpha => "alpha",
            Verb::V => "v",
            Verb::Klein => "klein",
            Verb::Legendre => "legendre",
            Verb::Lift => "lift",
            Verb::LiftContact => "lift-contact",
            Verb::FiniteOrderLift => "finite-order-lift",
            Verb::Exactness => "exactness",
            Verb::Regular => "regular",
            Verb::Multiplicity => "multiplicity",
            Verb::Iterate => "iterate",
            Verb::Degrees => "degrees",
            Verb::Cocycle => "cocycle",
            Verb::InverseCheck => "inverse-check",
            Verb::Catalog => "catalog",
            Verb::Selftest => "selftest",
        }
    }

    /// Argument synopsis shown in usage messages.
    pub fn usage(self) -> &'static str {
        match self {
            Verb::Analyze | Verb::Alpha | Verb::V | Verb::Regular => "MAP",
            Verb::Klein | Verb::Lift | Verb::LiftContact => "PLANE_MAP",
            Verb::Legendre => "[PLANE_MAP]",
            Verb::FiniteOrderLift => "PLANE_MAP ORDER",
            Verb::Exactness => "FORM|PLANE_MAP",
            Verb::Multiplicity => "MAP POLY",
            Verb::Iterate => "MAP N",
            Verb::Degrees => "MAP",
            Verb::Cocycle | Verb::InverseCheck => "MAP MAP",
            Verb::Catalog => "[NAME]",
            Verb::Selftest => "",
        }
    }

    /// Minimum and maximum number of positional arguments.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Verb::Legendre | Verb::Catalog => (0, 1),
            Verb::Selftest => (0, 0),
            Verb::FiniteOrderLift | Verb::Multiplicity | Verb::Iterate | Verb::Cocycle | Verb::InverseCheck => (2, 2),
            _ => (1, 1),
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verb {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Verb::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown verb '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Human,
    Machine,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "human" => Ok(OutputFormat::Human),
            "machine" => Ok(OutputFormat::Machine),
            _ => Err(format!("unknown format '{s}' (expected human or machine)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub window: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            window: DEFAULT_WINDOW,
            seed: 0,
            format: OutputFormat::Human,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub verb: Verb,
    pub args: Vec<String>,
    pub options: Options,
    /// Entries resolvable with `@name`; the built-in registry when `None`.
    pub catalog: Option<Vec<CatalogEntry>>,
}

impl Command {
    pub fn new(verb: Verb, args: &[&str]) -> Self {
        Command {
            verb,
            args: args.iter().map(|s| s.to_string()).collect(),
            options: Options::default(),
            catalog: None,
        }
    }

    pub fn with_options(mut self, options: Options) -> Self {
        self.options = options;
        self
    }

    fn echo(&self) -> String {
        let mut parts = vec![self.verb.name().to_string()];
        parts.extend(self.args.iter().cloned());
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    /// Inputs in canonical grammar.
    pub inputs: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    /// Catalog entry names the inputs came from.
    pub provenance: Vec<String>,
    pub exit_code: i32,
}

impl Report {
    fn new(command: String) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            results: Vec::new(),
            provenance: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    fn input(&mut self, k: impl Into<String>, v: impl ToString) {
        self.inputs.push((k.into(), v.to_string()));
    }

    fn result(&mut self, k: impl Into<String>, v: impl ToString) {
        self.results.push((k.into(), v.to_string()));
    }

    /// Marks a negative mathematical verdict.
    fn verdict(&mut self, holds: bool) {
        if !holds && self.exit_code == EXIT_OK {
            self.exit_code = EXIT_FALSE;
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Human => self.render_human(),
            OutputFormat::Machine => self.render_machine(),
        }
    }

    fn render_human(&self) -> String {
        let width = self
            .inputs
            .iter()
            .chain(&self.results)
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0)
            .max(6);
        let mut s = format!("$ {}\n", self.command);
        for (k, v) in &self.inputs {
            s.push_str(&format!("  {k:width$} <- {v}\n"));
        }
        for p in &self.provenance {
            s.push_str(&format!("  {:width$} <- catalog entry {p}\n", "source"));
        }
        for (k, v) in &self.results {
            s.push_str(&format!("  {k:width$} = {v}\n"));
        }
        s.push_str(&format!("  {:width$} = {}\n", "exit", self.exit_code));
        s
    }

    fn render_machine(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            s.push_str(&format!("input.{k}: {v}\n"));
        }
        for p in &self.provenance {
            s.push_str(&format!("provenance: {p}\n"));
        }
        for (k, v) in &self.results {
            s.push_str(&format!("result.{k}: {v}\n"));
        }
        s.push_str(&format!("exit_code: {}\n", self.exit_code));
        s
    }
}

/// Exit code for a failed computation.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    }
}

/// Runs a command; never panics on bad input.
pub fn run(cmd: &Command) -> Report {
    let mut report = Report::new(cmd.echo());
    let (lo, hi) = cmd.verb.arity();
    if cmd.args.len() < lo || cmd.args.len() > hi {
        report.result(
            "error",
            format!("usage: {} {}", cmd.verb, cmd.verb.usage()).trim_end(),
        );
        report.exit_code = EXIT_INPUT;
        return report;
    }
    let mut ctx = Ctx {
        cmd,
        report: &mut report,
        registry: None,
    };
    if let Err(e) = ctx.dispatch() {
        report.results.retain(|(k, _)| k != "error");
        report.result("error", &e);
        report.exit_code = exit_code_for(&e);
    }
    report
}

struct Ctx<'a> {
    cmd: &'a Command,
    report: &'a mut Report,
    registry: Option<Vec<CatalogEntry>>,
}

impl Ctx<'_> {
    fn entries(&mut self) -> &[CatalogEntry] {
        if let Some(c) = &self.cmd.catalog {
            return c;
        }
        self.registry.get_or_insert_with(registry)
    }

    fn arg(&self, i: usize) -> &str {
        self.cmd.args[i].trim()
    }

    /// `@name` (or a bare catalog name) resolves through the catalog.
    fn map(&mut self, i: usize, label: &str) -> Result<RationalMap> {
        let text = self.arg(i).to_string();
        let name = text.strip_prefix('@').or((!text.contains('(')).then_some(text.as_str()));
        let map = match name {
            Some(n) => {
                let e = lookup_in(self.entries(), n)?;
                self.report.provenance.push(e.name.clone());
                e.map
            }
            None => parse_map(&text, PlaneVars::Z0Z1)?,
        };
        self.report.input(label, &map);
        if map.chart() != Chart::AFFINE {
            self.report.input(format!("{label}.chart"), map.chart().tag());
        }
        Ok(map)
    }

    fn plane(&mut self, i: usize, label: &str) -> Result<RationalMap> {
        let m = self.map(i, label)?;
        if !matches!(m.chart(), Chart::Plane(_)) {
            return Err(Error::Arity(format!("expected a plane map, found chart {}", m.chart())));
        }
        Ok(m)
    }

    fn count(&mut self, i: usize, label: &str) -> Result<usize> {
        let n = parse_int(self.arg(i))?;
        let n = usize::try_from(n).map_err(|_| Error::Arity(format!("{label} must be non-negative")))?;
        self.report.input(label, n);
        Ok(n)
    }

    fn rng(&mut self) -> ChaCha8Rng {
        self.report.input("seed", self.cmd.options.seed);
        ChaCha8Rng::seed_from_u64(self.cmd.options.seed)
    }

    fn dispatch(&mut self) -> Result<()> {
        match self.cmd.verb {
            Verb::Analyze => self.analyze(),
            Verb::Alpha => {
                let phi = self.map(0, "map")?;
                let a = alpha_of(&phi)?;
                self.report.result("alpha", a);
                Ok(())
            }
            Verb::V => {
                let phi = self.map(0, "map")?;
                let v = multiplier(&phi)?;
                self.report.result("V", v);
                Ok(())
            }
            Verb::Klein => {
                let phi = self.plane(0, "map")?;
                let k = klein_embed(&phi)?;
                self.report.result("klein", &k);
                self.report.result("V", multiplier(&k)?);
                self.report.result("alpha", alpha_of(&k)?);
                Ok(())
            }
            Verb::Legendre => {
                let l = if self.cmd.args.is_empty() {
                    legendre_involution()
                } else {
                    legendre_family(&self.plane(0, "map")?)?
                };
                self.report.result("legendre", &l);
                self.report.result("V", multiplier(&l)?);
                self.report.result("alpha", alpha_of(&l)?);
                Ok(())
            }
            Verb::Lift => {
                let phi = self.plane(0, "map")?;
                let r = sigma_lift(&phi)?;
                self.lift_result(r);
                Ok(())
            }
            Verb::LiftContact => {
                let phi = self.plane(0, "map")?;
                let (lift, b) = sigma_lift_contact(&phi)?;
                self.report.result("lift", &lift);
                self.report.result("b", b);
                self.report.result("V", multiplier(&lift)?);
                Ok(())
            }
            Verb::FiniteOrderLift => {
                let phi = self.plane(0, "map")?;
                let order = self.count(1, "order")?;
                let r = finite_order_lift(&phi, order)?;
                self.lift_result(r);
                Ok(())
            }
            Verb::Exactness => self.exactness(),
            Verb::Regular => self.regular(),
            Verb::Multiplicity => {
                let phi = self.map(0, "map")?;
                let f = parse_ratfunc(self.arg(1))?;
                if !f.is_polynomial() || f.is_constant() {
                    return Err(Error::InvalidDivisor(f.to_string()));
                }
                self.report.input("f", &f);
                let k = contraction_multiplicity(&phi, f.num())?;
                self.report.result("V", multiplier(&phi)?);
                self.report.result("multiplicity", k);
                Ok(())
            }
            Verb::Iterate => {
                let phi = self.map(0, "map")?;
                let n = self.count(1, "n")?;
                let it = phi.iterate(n)?;
                self.report.result("iterate", &it);
                self.report.result("degree", it.degree());
                Ok(())
            }
            Verb::Degrees => self.degrees(),
            Verb::Cocycle => {
                let phi = self.map(0, "phi")?;
                let psi = self.map(1, "psi")?;
                let holds = cocycle_check(&phi, &psi)?;
                self.report.result("V(phi∘psi)", multiplier(&phi.compose(&psi)?)?);
                self.report.result("cocycle_holds", holds);
                self.report.verdict(holds);
                Ok(())
            }
            Verb::InverseCheck => {
                let phi = self.map(0, "phi")?;
                let psi = self.map(1, "psi")?;
                let holds = phi.verify_inverse(&psi)?;
                self.report.result("inverse", holds);
                self.report.verdict(holds);
                Ok(())
            }
            Verb::Catalog => self.catalog(),
            Verb::Selftest => self.selftest(),
        }
    }

    fn analyze(&mut self) -> Result<()> {
        let phi = self.map(0, "map")?;
        let r = analyze(&phi)?;
        self.report.result("is_contact", r.is_contact);
        self.report.result("jacobian_det", &r.jacobian_det);
        if let (Some(v), Some(a)) = (&r.v, &r.alpha) {
            self.report.result("V", v);
            self.report.result("alpha", a);
            self.report.result("preserves_omega", r.preserves_omega);
            self.report.result("det_jac_is_V_squared", r.det_jac_square_check);
        }
        self.report.verdict(r.is_contact);
        Ok(())
    }

    fn lift_result(&mut self, r: LiftResult) {
        match r {
            LiftResult::Lifted { map, b } => {
                self.report.result("verdict", "exact");
                self.report.result("lift", map);
                self.report.result("b", b);
            }
            LiftResult::Obstructed { witness, stage } => {
                self.report.result("verdict", "not_exact");
                self.report.result("witness", witness);
                self.report.result("stage", stage);
                self.report.verdict(false);
            }
        }
    }

    /// Takes a closed 1-form, or a plane map standing for `z0 dz1 − φ0 dφ1`.
    fn exactness(&mut self) -> Result<()> {
        let form = if looks_like_form(self.arg(0)) {
            parse_form(self.arg(0), Chart::PLANE01)?
        } else {
            let phi = self.plane(0, "map")?;
            lift_form(&phi, &RatFunc::one())?
        };
        self.report.input("form", &form);
        match exactness_test(&form)? {
            ExactnessResult::Exact { b } => {
                self.report.result("verdict", "exact");
                self.report.result("b", b);
            }
            ExactnessResult::NotExact { witness, stage } => {
                self.report.result("verdict", "not_exact");
                self.report.result("witness", witness);
                self.report.result("stage", stage);
                self.report.verdict(false);
            }
        }
        Ok(())
    }

    fn regular(&mut self) -> Result<()> {
        let phi = self.map(0, "map")?;
        let mut rng = self.rng();
        let r = regular_at_infinity(&phi, &mut rng)?;
        let mut at_inf: [Option<RatFunc>; NVARS] = Default::default();
        at_inf[3] = Some(RatFunc::zero());
        let ranks: Vec<String> = r.hinfty.sample_ranks.iter().map(usize::to_string).collect();
        self.report.result("hinfty", r.hinfty.kind_tag());
        self.report.result("into_hinfty", r.hinfty.into_hinfty);
        if !ranks.is_empty() {
            self.report.result("sample_ranks", ranks.join(","));
        }
        self.report.result("vbar", &r.vbar);
        self.report.result("vbar_mod_z3", r.vbar.substitute(&at_inf).map(|v| v.to_string()).unwrap_or_else(|_| "pole".into()));
        self.report.result("vbar_vanishes_on_hinfty", r.vbar_vanishes_on_hinfty);
        self.report.result("regular", r.regular);
        self.report.verdict(r.regular);
        Ok(())
    }

    fn degrees(&mut self) -> Result<()> {
        let phi = self.map(0, "map")?;
        let window = self.cmd.options.window;
        self.report.input("window", window);
        let s = degree_sequence(&phi, window)?;
        self.report.result("degrees", &s);
        let g = classify_growth(&s)?;
        self.report.result("growth", g.verdict);
        self.report.result("ratios", join_q(&g.ratio_evidence));
        if matches!(phi.chart(), Chart::Plane(_)) {
            let ks = klein_degree_sequence(&phi, window)?;
            let kg = classify_growth(&ks)?;
            self.report.result("klein_degrees", &ks);
            self.report.result("klein_growth", kg.verdict);
            let same = kg.verdict == g.verdict;
            self.report.result("same_order", same);
            let bounds = klein_bound_table(&phi, window.min(4))?;
            let b: Vec<String> = bounds.iter().map(|r| r.bound.to_string()).collect();
            self.report.result("klein_bound", b.join(","));
            let holds = bounds.iter().all(|r| r.holds());
            self.report.result("klein_bound_holds", holds);
            self.report.verdict(same && holds);
        }
        Ok(())
    }

    fn catalog(&mut self) -> Result<()> {
        if self.cmd.args.is_empty() {
            let names: Vec<String> = self.entries().iter().map(|e| e.name.clone()).collect();
            self.report.result("count", names.len());
            self.report.result("names", names.join(" "));
            return Ok(());
        }
        let name = self.arg(0).to_string();
        let e = lookup_in(self.entries(), &name)?;
        self.report.provenance.push(e.name.clone());
        self.report.result("chart", e.map.chart().tag());
        self.report.result("map", &e.map);
        for (f, v) in &e.expected {
            self.report.result(format!("expected.{f}"), v);
        }
        for (i, n) in e.notes.iter().enumerate() {
            self.report.result(format!("note.{}", i + 1), n);
        }
        Ok(())
    }

    fn selftest(&mut self) -> Result<()> {
        let seed = self.cmd.options.seed;
        self.report.input("seed", seed);
        let entries = self.entries().to_vec();
        let (mut checks, mut failures) = (0usize, 0usize);
        for e in &entries {
            for c in validate(e, seed) {
                checks += 1;
                if !c.ok {
                    failures += 1;
                    self.report.result(
                        format!("fail.{}.{}", e.name, c.field),
                        format!("expected {} got {}", c.expected, c.actual),
                    );
                }
            }
        }
        self.report.result("entries", entries.len());
        self.report.result("checks", checks);
        self.report.result("failures", failures);
        self.report.verdict(failures == 0);
        Ok(())
    }
}

fn join_q(v: &[Q]) -> String {
    v.iter()
        .map(crate::algebra::fmt_rational)
        .collect::<Vec<_>>()
        .join(",")
}

/// Helper used by tests and the book: polynomial from text.
pub fn poly(text: &str) -> Result<MultiPoly> {
    let f = parse_ratfunc(text)?;
    f.is_polynomial()
        .then(|| f.num().clone())
        .ok_or_else(|| Error::InvalidDivisor(f.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_on_catalog_entry() {
        let r = run(&Command::new(Verb::V, &["@nfamily:1"]));
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.get("V"), Some("z0/(2*z0*z1 + 2*z0 + z2)"));
        assert_eq!(r.provenance, vec!["nfamily:1".to_string()]);
    }

    #[test]
    fn exactness_verdict_exit() {
        let r = run(&Command::new(Verb::Exactness, &["(-z0 + 1/(z1^2 - 1), -z1)"]));
        assert_eq!(r.exit_code, EXIT_FALSE);
        assert_eq!(r.get("verdict"), Some("not_exact"));
        assert_eq!(r.get("witness"), Some("1/(z1^2 - 1)"));
        assert_eq!(r.get("stage"), Some("z1"));
        let r = run(&Command::new(Verb::Exactness, &["(-z0 + 1/(z1^2 - 1))*dz1"]));
        assert_eq!(r.exit_code, EXIT_INPUT, "not closed");
        let r = run(&Command::new(Verb::Exactness, &["z1*dz0 + z0*dz1"]));
        assert_eq!(r.get("b"), Some("z0*z1"));
    }

    #[test]
    fn input_errors() {
        let r = run(&Command::new(Verb::V, &["(z0 + , z1, z2)"]));
        assert_eq!(r.exit_code, EXIT_INPUT);
        let r = run(&Command::new(Verb::V, &[]));
        assert_eq!(r.exit_code, EXIT_INPUT);
        let r = run(&Command::new(Verb::Alpha, &["@missing"]));
        assert_eq!(r.exit_code, EXIT_INPUT);
    }

    #[test]
    fn machine_format_is_flat() {
        let r = run(&Command::new(Verb::Alpha, &["(z0/5, z0 + 5*z1, z2 - z0^2/10)"]));
        let text = r.render(OutputFormat::Machine);
        assert!(text.contains("result.alpha: 5\n"));
        assert!(text.ends_with("exit_code: 0\n"));
        assert!(text.lines().all(|l| l.contains(": ")));
    }
}
