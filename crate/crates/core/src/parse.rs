//! Text formats: polynomial expressions, pair elements, witness formulas,
//! and the sectioned job files the batch front-end consumes.
//!
//! One expression grammar serves every context.  An expression evaluates to
//! a fraction of polynomials; polynomial contexts then require a constant
//! denominator (so `1/2*x^3` works but `1/x` does not), while pair-element
//! contexts reduce the fraction.  All errors carry 1-based line/column
//! positions.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::monomial::Order;
use crate::pairs::{PairContext, PairElement, TameFormula, ZetaBlock};
use crate::poly::Polynomial;
use crate::ring::Ring;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

/// Cuts a source string into tokens; `line0` is the 1-based line number the
/// string starts on (so errors in section files point at the right line).
fn tokenize(src: &str, line0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = line0;
    let mut col = 1usize;
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |it: &mut std::iter::Peekable<std::str::Chars>| {
            it.next();
            col += 1;
        };
        match c {
            '\n' => {
                it.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => bump(&mut it),
            '+' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Plus, line: tline, col: tcol });
            }
            '-' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Minus, line: tline, col: tcol });
            }
            '*' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Star, line: tline, col: tcol });
            }
            '/' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Slash, line: tline, col: tcol });
            }
            '^' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Caret, line: tline, col: tcol });
            }
            '(' => {
                bump(&mut it);
                out.push(Token { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut it);
                out.push(Token { tok: Tok::RParen, line: tline, col: tcol });
            }
            ',' => {
                bump(&mut it);
                out.push(Token { tok: Tok::Comma, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        bump(&mut it);
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits.parse().expect("digit string");
                out.push(Token { tok: Tok::Num(n), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        bump(&mut it);
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            other => {
                return Err(perr(tline, tcol, format!("unexpected character '{other}'")))
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

/// A fraction of polynomials, the value of every parsed expression.
struct Frac {
    num: Polynomial,
    den: Polynomial,
}

impl Frac {
    fn poly(p: Polynomial) -> Frac {
        let one = Polynomial::one(p.ring().clone());
        Frac { num: p, den: one }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn sub(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    fn pow(&self, e: u32) -> Frac {
        Frac { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ring: &'a Arc<Ring>,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(src: &str, line0: usize, ring: &'a Arc<Ring>) -> Result<Parser<'a>> {
        let toks = tokenize(src, line0)?;
        let end = toks
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((line0, 1));
        Ok(Parser { toks, pos: 0, ring, end })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    let (l, c) = self.here();
                    self.next();
                    let rhs = self.unary()?;
                    if rhs.num.is_zero() {
                        return Err(perr(l, c, "division by zero"));
                    }
                    acc = acc.mul(&Frac { num: rhs.den, den: rhs.num });
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.next();
            let (l, c) = self.here();
            match self.next().map(|t| t.tok.clone()) {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| perr(l, c, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(perr(l, c, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Frac> {
        let (l, c) = self.here();
        match self.next().map(|t| t.tok.clone()) {
            Some(Tok::Num(n)) => Ok(Frac::poly(Polynomial::constant(
                self.ring.clone(),
                Scalar::Rat(BigRational::from_integer(n)),
            ))),
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(v) => Ok(Frac::poly(Polynomial::var(self.ring.clone(), v))),
                None => Err(perr(l, c, format!("unknown variable {name}"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let (l2, c2) = self.here();
                match self.next().map(|t| t.tok.clone()) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(perr(l2, c2, "expected ')'")),
                }
            }
            Some(other) => Err(perr(l, c, format!("unexpected token {other:?}"))),
            None => Err(perr(l, c, "unexpected end of expression")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(t) = self.peek() {
            return Err(perr(t.line, t.col, format!("trailing input {:?}", t.tok)));
        }
        Ok(())
    }
}

/// Parses one expression as a fraction `num/den` of polynomials in `ring`.
fn parse_fraction(
    src: &str,
    line0: usize,
    ring: &Arc<Ring>,
) -> Result<(Polynomial, Polynomial)> {
    let mut p = Parser::new(src, line0, ring)?;
    let f = p.expr()?;
    p.finish()?;
    Ok((f.num, f.den))
}

/// Parses a polynomial; the expression may use `/` only where the
/// denominator works out to a nonzero constant.
pub fn parse_polynomial_at(src: &str, line0: usize, ring: &Arc<Ring>) -> Result<Polynomial> {
    let (num, den) = parse_fraction(src, line0, ring)?;
    match den.total_deg() {
        None => Err(perr(line0, 1, "division by zero")),
        Some(0) => {
            let c = den.leading_coeff().expect("nonzero constant").clone();
            Ok(num.scale(&c.inv()?))
        }
        Some(_) => Err(perr(
            line0,
            1,
            "denominator is not constant in a polynomial context",
        )),
    }
}

pub fn parse_polynomial(src: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    parse_polynomial_at(src, 1, ring)
}

/// Parses an element of the pair field, e.g. `(e1*t1 + t2^2)/(1 - e2)`.
pub fn parse_pair_element_at(
    src: &str,
    line0: usize,
    ctx: &PairContext,
) -> Result<PairElement> {
    let (num, den) = parse_fraction(src, line0, ctx.ring())?;
    if den.is_zero() {
        return Err(perr(line0, 1, "division by zero"));
    }
    ctx.fraction(num, den)
}

pub fn parse_pair_element(src: &str, ctx: &PairContext) -> Result<PairElement> {
    parse_pair_element_at(src, 1, ctx)
}

// ---------------------------------------------------------------------------
// Witness formulas
// ---------------------------------------------------------------------------

/// Parses the line-oriented witness-formula format produced by
/// `TameFormula`'s display:
///
/// ```text
/// free: x, y            (or `free: -`)
/// block z: arity 2, nonzero
/// eq: z_1 - x*z_0
/// locus: ...
/// ```
///
/// A bare `true` line (printed for tautologies) is accepted and ignored.
/// `line0` is the 1-based number of the first line.
pub fn parse_tame_formula(
    ctx: &PairContext,
    lines: &[String],
    line0: usize,
) -> Result<TameFormula> {
    let mut x_names: Option<Vec<String>> = None;
    let mut blocks: Vec<ZetaBlock> = Vec::new();
    let mut eqs: Vec<(usize, String)> = Vec::new();
    let mut loci: Vec<(usize, String)> = Vec::new();
    for (i, raw) in lines.iter().enumerate() {
        let lno = line0 + i;
        let line = raw.trim();
        if line.is_empty() || line == "true" {
            continue;
        }
        if let Some(rest) = line.strip_prefix("free:") {
            let rest = rest.trim();
            let names = if rest == "-" || rest.is_empty() {
                Vec::new()
            } else {
                rest.split(',').map(|s| s.trim().to_string()).collect()
            };
            x_names = Some(names);
        } else if let Some(rest) = line.strip_prefix("block ") {
            let (name, spec) = rest.split_once(':').ok_or_else(|| {
                perr(lno, 1, "expected `block NAME: arity K[, nonzero]`")
            })?;
            let mut arity: Option<usize> = None;
            let mut projective = false;
            for part in spec.split(',') {
                let part = part.trim();
                if let Some(k) = part.strip_prefix("arity ") {
                    arity = Some(k.trim().parse().map_err(|_| {
                        perr(lno, 1, format!("bad arity {k:?}"))
                    })?);
                } else if part == "nonzero" {
                    projective = true;
                } else if !part.is_empty() {
                    return Err(perr(lno, 1, format!("unknown block attribute {part:?}")));
                }
            }
            let arity =
                arity.ok_or_else(|| perr(lno, 1, "block is missing an arity"))?;
            blocks.push(ZetaBlock { name: name.trim().to_string(), arity, projective });
        } else if let Some(rest) = line.strip_prefix("eq:") {
            eqs.push((lno, rest.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("locus:") {
            loci.push((lno, rest.trim().to_string()));
        } else {
            return Err(perr(lno, 1, format!("unrecognized formula line {line:?}")));
        }
    }
    let x_names = x_names.ok_or_else(|| {
        perr(line0, 1, "formula needs a `free:` line (use `free: -` for none)")
    })?;
    let ring = TameFormula::build_ring(ctx, &x_names, &blocks)?;
    let parse_all = |items: &[(usize, String)]| -> Result<Vec<Polynomial>> {
        items
            .iter()
            .map(|(lno, src)| parse_polynomial_at(src, *lno, &ring))
            .collect()
    };
    let polys = parse_all(&eqs)?;
    let gamma = parse_all(&loci)?;
    TameFormula::new(ctx.clone(), x_names, blocks, polys, gamma)
}

// ---------------------------------------------------------------------------
// Job files
// ---------------------------------------------------------------------------

/// Term-order choice exposed in job headers and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderChoice {
    Grevlex,
    Lex,
}

impl OrderChoice {
    pub fn parse(s: &str) -> Option<OrderChoice> {
        match s {
            "grevlex" => Some(OrderChoice::Grevlex),
            "lex" => Some(OrderChoice::Lex),
            _ => None,
        }
    }

    /// The concrete order on a ring with `num_vars` variables, with
    /// declaration-order priority.
    pub fn order(&self, num_vars: usize) -> Order {
        let priority: Vec<u32> = (0..num_vars as u32).collect();
        match self {
            OrderChoice::Grevlex => Order::grevlex(priority),
            OrderChoice::Lex => Order::lex(priority),
        }
    }
}

impl fmt::Display for OrderChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderChoice::Grevlex => write!(f, "grevlex"),
            OrderChoice::Lex => write!(f, "lex"),
        }
    }
}

/// One named section of a job file, kept as raw trimmed lines.
#[derive(Debug, Clone, Eq)]
pub struct Section {
    pub name: String,
    /// 1-based line number of the first line after the section header;
    /// position metadata, not part of the section's identity.
    pub line0: usize,
    pub lines: Vec<String>,
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.lines == other.lines
    }
}

/// A parsed job file: a header of options and variable blocks, followed by
/// named sections whose interpretation depends on the command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: String,
    pub characteristic: u32,
    pub order: OrderChoice,
    pub seed: u64,
    pub window: u32,
    pub samples: u32,
    pub blocks: Vec<(String, Vec<String>)>,
    pub sections: Vec<Section>,
}

impl JobSpec {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Builds the declared ring over the declared field, with the declared
    /// term order.
    pub fn ring(&self) -> Result<Arc<Ring>> {
        if self.blocks.is_empty() {
            return Err(Error::Invalid("job declares no variable blocks".into()));
        }
        let field = if self.characteristic == 0 {
            crate::field::FieldKind::Rationals
        } else {
            crate::field::FieldKind::prime(u64::from(self.characteristic))?
        };
        let views: Vec<(&str, Vec<&str>)> = self
            .blocks
            .iter()
            .map(|(n, vs)| (n.as_str(), vs.iter().map(String::as_str).collect()))
            .collect();
        let slices: Vec<(&str, &[&str])> =
            views.iter().map(|(n, vs)| (*n, vs.as_slice())).collect();
        let ring = Ring::new(field, &slices)?;
        let n = ring.num_vars();
        Ok(ring.with_order(self.order.order(n)))
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "job: {}", self.command)?;
        writeln!(f, "char: {}", self.characteristic)?;
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "window: {}", self.window)?;
        writeln!(f, "samples: {}", self.samples)?;
        for (name, vars) in &self.blocks {
            writeln!(f, "block {name}: {}", vars.join(" "))?;
        }
        for s in &self.sections {
            writeln!(f)?;
            writeln!(f, "[{}]", s.name)?;
            for line in &s.lines {
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Parses a job file.  Blank lines and `#` comment lines are ignored; the
/// printed form of the result parses back to an equal value.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut command: Option<String> = None;
    let mut characteristic = 0u32;
    let mut order = OrderChoice::Grevlex;
    let mut seed = 0u64;
    let mut window = 1u32;
    let mut samples = 20u32;
    let mut blocks = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    let mut in_section = false;
    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| perr(lno, 1, "unterminated section header"))?
                .trim()
                .to_string();
            if sections.iter().any(|s: &Section| s.name == name) {
                return Err(perr(lno, 1, format!("duplicate section [{name}]")));
            }
            sections.push(Section { name, line0: lno + 1, lines: Vec::new() });
            in_section = true;
            continue;
        }
        if in_section {
            sections.last_mut().expect("open section").lines.push(line.to_string());
            continue;
        }
        // Header line.
        if let Some(rest) = line.strip_prefix("block ") {
            let (name, vars) = rest
                .split_once(':')
                .ok_or_else(|| perr(lno, 1, "expected `block NAME: v1 v2 ...`"))?;
            let vars: Vec<String> =
                vars.split_whitespace().map(|s| s.to_string()).collect();
            blocks.push((name.trim().to_string(), vars));
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| perr(lno, 1, format!("expected `key: value`, got {line:?}")))?;
        let value = value.trim();
        let numeric = |what: &str| {
            perr(lno, 1, format!("{what} must be a number, got {value:?}"))
        };
        match key.trim() {
            "job" => command = Some(value.to_string()),
            "char" => characteristic = value.parse().map_err(|_| numeric("char"))?,
            "order" => {
                order = OrderChoice::parse(value)
                    .ok_or_else(|| perr(lno, 1, format!("unknown order {value:?}")))?
            }
            "seed" => seed = value.parse().map_err(|_| numeric("seed"))?,
            "window" => window = value.parse().map_err(|_| numeric("window"))?,
            "samples" => samples = value.parse().map_err(|_| numeric("samples"))?,
            other => return Err(perr(lno, 1, format!("unknown header key {other:?}"))),
        }
    }
    let command =
        command.ok_or_else(|| perr(1, 1, "job file is missing a `job:` line"))?;
    Ok(JobSpec {
        command,
        characteristic,
        order,
        seed,
        window,
        samples,
        blocks,
        sections,
    })
}

// ---------------------------------------------------------------------------
// Label sets (finite topologies)
// ---------------------------------------------------------------------------

/// Splits a whitespace-separated label line.
pub fn parse_labels(line: &str) -> Vec<String> {
    line.split_whitespace().map(|s| s.to_string()).collect()
}

/// Encodes one line of labels as a subset bitmask of the universe; a single
/// `-` stands for the empty set.
pub fn set_from_labels(line: &str, universe: &[String], lno: usize) -> Result<u32> {
    let line = line.trim();
    if line == "-" {
        return Ok(0);
    }
    let mut mask = 0u32;
    for label in line.split_whitespace() {
        let pos = universe.iter().position(|u| u == label).ok_or_else(|| {
            perr(lno, 1, format!("label {label:?} is not in the universe"))
        })?;
        mask |= 1 << pos;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;

    fn ring2() -> Arc<Ring> {
        Ring::new(FieldKind::Rationals, &[("x", &["x0", "x1"])]).unwrap()
    }

    #[test]
    fn polynomial_example_round_trips() {
        let r = ring2();
        let p = parse_polynomial("3*x0^2*x1 - 1/2*x1^3", &r).unwrap();
        let x0 = Polynomial::var(r.clone(), 0);
        let x1 = Polynomial::var(r.clone(), 1);
        let expect = x0.pow(2).mul(&x1).scale(&Scalar::from_int(3))
            .sub(&x1.pow(3).scale(&Scalar::from_ratio(1, 2)));
        assert_eq!(p, expect);
        let again = parse_polynomial(&p.to_string(), &r).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn expression_grammar_corners() {
        let r = ring2();
        // Unary minus, parentheses, constant division.
        let p = parse_polynomial("-(x0 - 1)^2", &r).unwrap();
        let q = parse_polynomial("-x0^2 + 2*x0 - 1", &r).unwrap();
        assert_eq!(p, q);
        let p = parse_polynomial("(x0 + x1)/2", &r).unwrap();
        let q = parse_polynomial("1/2*x0 + 1/2*x1", &r).unwrap();
        assert_eq!(p, q);
        // A fraction that cancels to a polynomial is accepted.
        let p = parse_polynomial("x0*x1/x1", &r);
        assert!(p.is_err(), "nonconstant denominators are rejected syntactically");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring2();
        match parse_polynomial("x0 + $", &r) {
            Err(Error::Parse { line: 1, col: 6, .. }) => {}
            other => panic!("expected a position at col 6, got {other:?}"),
        }
        match parse_polynomial("x0 + y9", &r) {
            Err(Error::Parse { line: 1, col: 6, msg }) => {
                assert!(msg.contains("y9"));
            }
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
        match parse_polynomial("x0 x1", &r) {
            Err(Error::Parse { line: 1, col: 4, .. }) => {}
            other => panic!("expected trailing-input error, got {other:?}"),
        }
        match parse_polynomial("x0^x1", &r) {
            Err(Error::Parse { line: 1, col: 4, .. }) => {}
            other => panic!("expected exponent error, got {other:?}"),
        }
        match parse_polynomial("1/0", &r) {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected division-by-zero error, got {other:?}"),
        }
        // Multi-line sources advance the line counter.
        match parse_polynomial("x0 +\n  $", &r) {
            Err(Error::Parse { line: 2, col: 3, .. }) => {}
            other => panic!("expected an error on line 2, got {other:?}"),
        }
    }

    #[test]
    fn pair_element_round_trips() {
        let ctx = PairContext::new(2, 2).unwrap();
        let spec_example = "(e1*t1 + t2^2)/(1 - e2)";
        let a = parse_pair_element(spec_example, &ctx).unwrap();
        let again = parse_pair_element(&a.to_string(), &ctx).unwrap();
        assert_eq!(a, again);
        // Arithmetic identities survive parsing.
        let b = parse_pair_element("(t1^2 - e1^2)/(t1 - e1)", &ctx).unwrap();
        let c = parse_pair_element("t1 + e1", &ctx).unwrap();
        assert_eq!(b, c);
    }

    #[test]
    fn formula_round_trips() {
        let ctx = PairContext::new(2, 2).unwrap();
        let lines: Vec<String> = [
            "free: x",
            "block z: arity 2, nonzero",
            "eq: z_1 - x*z_0",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let phi = parse_tame_formula(&ctx, &lines, 1).unwrap();
        assert_eq!(phi.x_names(), ["x".to_string()]);
        assert_eq!(phi.blocks(), [ZetaBlock::projective("z", 2)]);
        let printed: Vec<String> = phi.to_string().lines().map(String::from).collect();
        let again = parse_tame_formula(&ctx, &printed, 1).unwrap();
        assert_eq!(phi, again);
        // Tautologies print a bare `true` line that parses back.
        let top = TameFormula::tautology(ctx.clone(), vec!["y".to_string()]).unwrap();
        let printed: Vec<String> = top.to_string().lines().map(String::from).collect();
        let again = parse_tame_formula(&ctx, &printed, 1).unwrap();
        assert_eq!(top, again);
        // Missing free line is an error.
        let bad = vec!["block z: arity 1, nonzero".to_string()];
        assert!(parse_tame_formula(&ctx, &bad, 1).is_err());
    }

    #[test]
    fn job_files_round_trip() {
        let text = "\
# a groebner job
job: groebner-basis
order: lex
block x: x0 x1 x2

[polynomials]
x0^2 - x1*x2
x0*x1 - x2^2
";
        let job = parse_job(text).unwrap();
        assert_eq!(job.command, "groebner-basis");
        assert_eq!(job.order, OrderChoice::Lex);
        assert_eq!(job.characteristic, 0);
        assert_eq!(job.blocks, vec![("x".to_string(), vec!["x0".into(), "x1".into(), "x2".into()])]);
        assert_eq!(job.section("polynomials").unwrap().lines.len(), 2);
        let printed = job.to_string();
        let again = parse_job(&printed).unwrap();
        assert_eq!(job, again);
        // The declared ring honors the order choice.
        let ring = job.ring().unwrap();
        assert_eq!(ring.num_vars(), 3);
        // Header errors are positioned.
        match parse_job("job: x\nbogus line\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected header error on line 2, got {other:?}"),
        }
        assert!(parse_job("order: lex\n").is_err(), "missing job line");
    }

    #[test]
    fn label_sets_encode_subsets() {
        let universe = parse_labels("a b c");
        assert_eq!(universe.len(), 3);
        assert_eq!(set_from_labels("-", &universe, 1).unwrap(), 0);
        assert_eq!(set_from_labels("a c", &universe, 1).unwrap(), 0b101);
        assert!(set_from_labels("a d", &universe, 1).is_err());
    }
}
