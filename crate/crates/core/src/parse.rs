//! Text grammar shared by the CLI, the catalog file and the printers.
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' (['-'] INT | atom))*
//! atom  := INT | z0..z3 | dz0..dz3 | '(' expr ')'
//! ```
//!
//! `a^n` with an integer `n` is a power; `a^b` with a form `b` is a wedge.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{RatFunc, NVARS, Q};
use crate::chart::{Chart, PlaneVars};
use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::maps::RationalMap;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Diff(usize),
    Op(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str, aliases: &[(&str, usize)]) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = BigInt::parse_bytes(&bytes[start..i], 10).expect("digits");
            out.push(Token { tok: Tok::Int(n), pos: start });
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            out.push(Token {
                tok: identifier(word, aliases).ok_or_else(|| syntax(start, format!("unknown identifier '{word}'")))?,
                pos: start,
            });
        } else if "+-*/^(),:".contains(c) {
            out.push(Token { tok: Tok::Op(c), pos: start });
            i += 1;
        } else {
            return Err(syntax(start, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

fn identifier(word: &str, aliases: &[(&str, usize)]) -> Option<Tok> {
    if let Some(&(_, v)) = aliases.iter().find(|(a, _)| *a == word) {
        return Some(Tok::Var(v));
    }
    let index = |s: &str| s.parse::<usize>().ok().filter(|&k| k < NVARS && s.len() == 1);
    if let Some(rest) = word.strip_prefix("dz") {
        return index(rest).map(Tok::Diff);
    }
    word.strip_prefix('z').and_then(index).map(Tok::Var)
}

/// A parsed expression: a homogeneous-degree combination of wedge basis
/// elements. Scalars are degree 0 with the single key `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Value {
    degree: u32,
    terms: BTreeMap<u8, RatFunc>,
}

impl Value {
    fn scalar(r: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        Value { degree: 0, terms }
    }

    fn as_scalar(&self) -> Option<RatFunc> {
        (self.degree == 0).then(|| self.terms.get(&0).cloned().unwrap_or_else(RatFunc::zero))
    }

    fn add(mut self, other: Value, pos: usize) -> Result<Value> {
        if self.degree != other.degree {
            return Err(syntax(pos, "cannot add terms of different form degree"));
        }
        for (k, c) in other.terms {
            let e = self.terms.entry(k).or_insert_with(RatFunc::zero);
            *e = &*e + &c;
            if e.is_zero() {
                self.terms.remove(&k);
            }
        }
        Ok(self)
    }

    fn scale(self, r: &RatFunc) -> Value {
        let degree = self.degree;
        let terms = self
            .terms
            .into_iter()
            .map(|(k, c)| (k, &c * r))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Value { degree, terms }
    }

    fn neg(self) -> Value {
        self.scale(&RatFunc::from_int(-1))
    }

    fn wedge(&self, other: &Value, pos: usize) -> Result<Value> {
        let degree = self.degree + other.degree;
        if degree > 3 {
            return Err(syntax(pos, "wedge product of degree above 3"));
        }
        let mut out = Value {
            degree,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let swaps: u32 = (0..NVARS)
                    .filter(|j| b & (1 << j) != 0)
                    .map(|j| (a >> (j + 1)).count_ones())
                    .sum();
                let c = ca * cb;
                let c = if swaps % 2 == 0 { c } else { -c };
                let mut t = BTreeMap::new();
                t.insert(a | b, c);
                out = out.add(Value { degree, terms: t }, pos)?;
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            let pos = self.pos();
            if self.eat('+') {
                acc = acc.add(self.term()?, pos)?;
            } else if self.eat('-') {
                acc = acc.add(self.term()?.neg(), pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match (acc.as_scalar(), rhs.as_scalar()) {
                    (Some(a), _) => rhs.scale(&a),
                    (_, Some(b)) => acc.scale(&b),
                    _ => return Err(syntax(pos, "use '^' for the wedge of two forms")),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let d = rhs
                    .as_scalar()
                    .ok_or_else(|| syntax(pos, "cannot divide by a form"))?;
                if d.is_zero() {
                    return Err(syntax(pos, "division by zero"));
                }
                acc = acc.scale(&d.recip().expect("nonzero"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let mut acc = self.atom()?;
        loop {
            let pos = self.pos();
            if !self.eat('^') {
                return Ok(acc);
            }
            let neg = self.eat('-');
            if let Some(Tok::Int(n)) = self.peek().cloned() {
                self.i += 1;
                let base = acc
                    .as_scalar()
                    .ok_or_else(|| syntax(pos, "integer power of a form"))?;
                let mut e = n.to_i64().filter(|e| *e <= 10_000).ok_or_else(|| syntax(pos, "exponent too large"))?;
                if neg {
                    e = -e;
                }
                let p = base.pow(e).map_err(|_| syntax(pos, "negative power of zero"))?;
                acc = Value::scalar(p);
            } else {
                if neg {
                    return Err(syntax(self.pos(), "expected an integer exponent"));
                }
                let rhs = self.atom()?;
                if acc.degree == 0 || rhs.degree == 0 {
                    return Err(syntax(pos, "exponent must be an integer literal"));
                }
                acc = acc.wedge(&rhs, pos)?;
            }
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.i += 1;
        match tok {
            Tok::Int(n) => Ok(Value::scalar(RatFunc::constant(Q::from_integer(n)))),
            Tok::Var(v) => Ok(Value::scalar(RatFunc::var(v))),
            Tok::Diff(v) => {
                let mut terms = BTreeMap::new();
                terms.insert(1u8 << v, RatFunc::one());
                Ok(Value { degree: 1, terms })
            }
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op(c) => Err(syntax(pos, format!("unexpected '{c}'"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(syntax(self.pos(), "trailing input")),
        }
    }
}

fn parse_value(text: &str, aliases: &[(&str, usize)]) -> Result<Value> {
    let toks = lex(text, aliases)?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        end: text.len(),
    };
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// Parses a rational function in `z0..z3`.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    parse_ratfunc_with_aliases(text, &[])
}

/// Like [`parse_ratfunc`] with extra variable names, e.g. `("t", 0)`.
pub fn parse_ratfunc_with_aliases(text: &str, aliases: &[(&str, usize)]) -> Result<RatFunc> {
    parse_value(text, aliases)?
        .as_scalar()
        .ok_or_else(|| syntax(0, "expected a function, found a differential form"))
}

/// Parses a 1-, 2- or 3-form (or a function, as a 0-form) on `chart`.
pub fn parse_form(text: &str, chart: Chart) -> Result<DiffForm> {
    let v = parse_value(text, &[])?;
    DiffForm::from_terms(chart, v.degree, v.terms.into_iter().collect())
}

/// Whether `text` mentions any differential `dz_i`.
pub fn looks_like_form(text: &str) -> bool {
    lex(text, &[]).is_ok_and(|t| t.iter().any(|t| matches!(t.tok, Tok::Diff(_))))
}

/// Splits an optional leading `chart=<tag>` off a map description.
pub fn split_chart_prefix(text: &str) -> Result<(Option<Chart>, &str)> {
    let trimmed = text.trim_start();
    let Some(rest) = trimmed.strip_prefix("chart=") else {
        return Ok((None, text));
    };
    let end = rest
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(rest.len());
    let tag = &rest[..end];
    let chart = Chart::from_tag(tag).ok_or_else(|| {
        syntax(text.len() - rest.len(), format!("unknown chart '{tag}'"))
    })?;
    Ok((Some(chart), &rest[end..]))
}

/// Parses `(e1, e2)`, `(e1, e2, e3)` or `(e0 : e1 : e2 : e3)`.
///
/// Plane maps take their chart from the prefix, else from the variables used
/// (`z0` means `(z0, z1)`, `z2` means `(z1, z2)`), else from `plane_default`.
pub fn parse_map(text: &str, plane_default: PlaneVars) -> Result<RationalMap> {
    let (explicit, body) = split_chart_prefix(text)?;
    let offset = text.len() - body.len();
    let toks = lex(body, &[]).map_err(|e| shift(e, offset))?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        end: body.len(),
    };
    let (comps, homogeneous) = tuple(&mut p).map_err(|e| shift(e, offset))?;
    if homogeneous {
        if explicit.is_some_and(|c| c != Chart::Homogeneous) {
            return Err(Error::Arity("':' separators denote a homogeneous map".into()));
        }
        let polys = comps
            .iter()
            .map(|c| {
                c.is_polynomial()
                    .then(|| c.num().clone())
                    .ok_or_else(|| Error::Arity("homogeneous components must be polynomials".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        return RationalMap::homogeneous(polys);
    }
    let chart = match (explicit, comps.len()) {
        (Some(c), _) => c,
        (None, 2) => Chart::Plane(infer_plane(&comps, plane_default)?),
        (None, 3) => Chart::AFFINE,
        (None, n) => return Err(Error::Arity(format!("a map needs 2 or 3 components, found {n}"))),
    };
    RationalMap::new(chart, comps)
}

fn infer_plane(comps: &[RatFunc], default: PlaneVars) -> Result<PlaneVars> {
    let mask = comps.iter().fold(0u8, |m, c| m | c.var_mask());
    match (mask & 1 != 0, mask & 4 != 0) {
        (true, true) => Err(Error::Arity("a plane map uses either (z0, z1) or (z1, z2)".into())),
        (true, false) => Ok(PlaneVars::Z0Z1),
        (false, true) => Ok(PlaneVars::Z1Z2),
        (false, false) => Ok(default),
    }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Syntax { pos, message } => Error::Syntax {
            pos: pos + offset,
            message,
        },
        other => other,
    }
}

fn tuple(p: &mut Parser) -> Result<(Vec<RatFunc>, bool)> {
    p.expect('(')?;
    let mut comps = Vec::new();
    let mut sep: Option<char> = None;
    loop {
        let pos = p.pos();
        let v = p.expr()?;
        comps.push(v.as_scalar().ok_or_else(|| syntax(pos, "map components must be functions"))?);
        let pos = p.pos();
        if p.eat(')') {
            break;
        }
        let c = if p.eat(',') {
            ','
        } else if p.eat(':') {
            ':'
        } else {
            return Err(syntax(pos, "expected ',', ':' or ')'"));
        };
        if sep.is_some_and(|s| s != c) {
            return Err(syntax(pos, "mixed ',' and ':' separators"));
        }
        sep = Some(c);
    }
    p.finish()?;
    if comps.len() < 2 {
        return Err(Error::Arity("a map needs at least two components".into()));
    }
    Ok((comps, sep == Some(':')))
}

/// Parses a rational number such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let r = parse_ratfunc(text)?;
    r.constant_value()
        .ok_or_else(|| syntax(0, format!("'{}' is not a constant", text.trim())))
}

/// Parses an integer that fits a machine word.
pub fn parse_int(text: &str) -> Result<i64> {
    let q = parse_rational(text)?;
    if !q.is_integer() {
        return Err(syntax(0, format!("'{}' is not an integer", text.trim())));
    }
    q.to_integer()
        .to_i64()
        .ok_or_else(|| syntax(0, "integer out of range"))
}
