//! Payload parsers for job-file sections: numbers, scalars, vectors,
//! numerical polynomials, index subsets, pair elements and formulas.

use std::sync::Arc;

use noether_core::error::{Error, Result};
use noether_core::exterior::{index_subsets, ExteriorVector, PluckerPoint};
use noether_core::field::{FieldKind, Scalar};
use noether_core::numpoly::NumericalPolynomial;
use noether_core::pairs::{BaseField, PairContext, PairElement, TameFormula};
use noether_core::parse::{
    parse_pair_element_at, parse_polynomial_at, parse_tame_formula, JobSpec, Section,
};
use noether_core::poly::Polynomial;
use noether_core::ring::Ring;

pub fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col: 1, msg: msg.into() }
}

/// The coefficient field declared in the job header.
pub fn job_field(job: &JobSpec) -> Result<FieldKind> {
    if job.characteristic == 0 {
        Ok(FieldKind::Rationals)
    } else {
        FieldKind::prime(u64::from(job.characteristic))
    }
}

pub fn require_section<'a>(job: &'a JobSpec, name: &str) -> Result<&'a Section> {
    job.section(name)
        .ok_or_else(|| Error::Invalid(format!("job `{}` needs a [{name}] section", job.command)))
}

/// The single payload line of a one-line section, with its line number.
pub fn single_line(sec: &Section) -> Result<(&str, usize)> {
    match sec.lines.as_slice() {
        [line] => Ok((line, sec.line0)),
        _ => Err(perr(
            sec.line0,
            format!("section [{}] must hold exactly one line", sec.name),
        )),
    }
}

pub fn parse_u32(text: &str, lno: usize, what: &str) -> Result<u32> {
    text.trim()
        .parse()
        .map_err(|_| perr(lno, format!("{what} must be a non-negative integer, got {text:?}")))
}

/// All lines of a section parsed as polynomials over `ring`.
pub fn poly_lines(sec: &Section, ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
    sec.lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_polynomial_at(l, sec.line0 + i, ring))
        .collect()
}

/// A single polynomial from a one-line section.
pub fn poly_line(sec: &Section, ring: &Arc<Ring>) -> Result<Polynomial> {
    let (line, lno) = single_line(sec)?;
    parse_polynomial_at(line, lno, ring)
}

/// A numerical polynomial written in the variable `d`, e.g. `3*d + 1`.
pub fn parse_numpoly(text: &str, lno: usize) -> Result<NumericalPolynomial> {
    let ring = Ring::simple(FieldKind::Rationals, &["d"])?;
    let p = parse_polynomial_at(text, lno, &ring)?;
    let deg = p.total_deg().unwrap_or(0) as usize;
    let mut coeffs = vec![num_rational::BigRational::from_integer(0.into()); deg + 1];
    for (m, c) in p.terms() {
        let r = c
            .as_rational()
            .ok_or_else(|| perr(lno, "numerical polynomials take rational coefficients"))?;
        coeffs[m.exp(0) as usize] = r.clone();
    }
    NumericalPolynomial::from_power_basis(&coeffs)
        .map_err(|_| perr(lno, format!("{text:?} is not integer-valued on the integers")))
}

/// A constant scalar expression such as `-3/2`.
pub fn parse_scalar(field: &FieldKind, text: &str, lno: usize) -> Result<Scalar> {
    let ring = Ring::new(field.clone(), &[("c", &["c"])])?;
    let p = parse_polynomial_at(text, lno, &ring)?;
    if p.is_zero() {
        return Ok(field.zero());
    }
    if p.total_deg() != Some(0) {
        return Err(perr(lno, format!("expected a constant scalar, got {text:?}")));
    }
    Ok(p.terms()[0].1.clone())
}

/// Splits on commas outside parentheses.
pub fn split_top_commas(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Strips one pair of surrounding parentheses when they enclose the whole
/// expression.
fn strip_outer_parens(s: &str) -> &str {
    let t = s.trim();
    let inner = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner,
        None => return t,
    };
    let mut depth = 0i64;
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return t; // the outer parens close early: `(a),(b)`
        }
    }
    inner.trim()
}

/// A coordinate vector `(1, 0, 0)` or `1, 0, 0`.
pub fn parse_vector(field: &FieldKind, line: &str, lno: usize) -> Result<Vec<Scalar>> {
    split_top_commas(strip_outer_parens(line))
        .iter()
        .map(|c| parse_scalar(field, c, lno))
        .collect()
}

/// An increasing index subset `0 2`; `-` is the empty subset.
pub fn parse_subset(text: &str, lno: usize) -> Result<Vec<u32>> {
    let text = text.trim();
    if text == "-" {
        return Ok(Vec::new());
    }
    let mut idx = Vec::new();
    for tok in text.split_whitespace() {
        idx.push(parse_u32(tok, lno, "index")?);
    }
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(perr(lno, format!("repeated index in subset {text:?}")));
    }
    Ok(sorted)
}

/// Lines `SUBSET: coefficient` assembled into a multivector of dimension
/// `dim`; the grade is taken from the first subset.
pub fn parse_multivector(
    field: &FieldKind,
    sec: &Section,
    dim: u32,
) -> Result<ExteriorVector> {
    let mut coords = Vec::new();
    let mut grade: Option<u32> = None;
    for (i, line) in sec.lines.iter().enumerate() {
        let lno = sec.line0 + i;
        let (subset, coeff) = line
            .split_once(':')
            .ok_or_else(|| perr(lno, "expected `SUBSET: coefficient`"))?;
        let subset = parse_subset(subset, lno)?;
        let g = *grade.get_or_insert(subset.len() as u32);
        if subset.len() as u32 != g {
            return Err(perr(lno, "all subsets must have the same size"));
        }
        coords.push((subset, parse_scalar(field, coeff, lno)?));
    }
    let grade = grade.ok_or_else(|| perr(sec.line0, "empty multivector section"))?;
    ExteriorVector::from_coords(field.clone(), grade, dim, coords)
}

/// A projective coordinate tuple `(0:1)` over the grade-`r` subsets of
/// `{0..s-1}` in subset-lex order.
pub fn parse_eta(field: &FieldKind, line: &str, lno: usize, r: u32, s: u32) -> Result<PluckerPoint> {
    let subsets = index_subsets(r, s);
    let parts: Vec<&str> = strip_outer_parens(line).split(':').collect();
    if parts.len() != subsets.len() {
        return Err(perr(
            lno,
            format!("expected {} coordinates for grade {r} in dimension {s}, got {}", subsets.len(), parts.len()),
        ));
    }
    let mut coords = Vec::new();
    for (subset, part) in subsets.into_iter().zip(parts) {
        coords.push((subset, parse_scalar(field, part, lno)?));
    }
    PluckerPoint::new(ExteriorVector::from_coords(field.clone(), r, s, coords)?)
}

/// The wedge-basis label of an index subset (`e01`, or `e0_10` past ten
/// dimensions).
pub fn wedge_name(subset: &[u32], dim: u32) -> String {
    let parts: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    if dim <= 10 {
        format!("e{}", parts.join(""))
    } else {
        format!("e{}", parts.join("_"))
    }
}

/// Renders a projective tuple `(a:b:c)`.
pub fn colon_tuple(coords: &[Scalar]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(":"))
}

/// Renders an affine tuple `(a, b, c)`.
pub fn comma_tuple(coords: &[Scalar]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

// ---------------------------------------------------------------------------
// Pair-model payloads
// ---------------------------------------------------------------------------

/// The pair model of the job: an optional `[context]` section holding one
/// line `E T` (counts of e- and t-variables); the default model is 2 + 2.
pub fn pair_context(job: &JobSpec) -> Result<PairContext> {
    let Some(sec) = job.section("context") else {
        return PairContext::new(2, 2);
    };
    let (line, lno) = single_line(sec)?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(perr(lno, "expected `E T` variable counts"));
    }
    let e = parse_u32(toks[0], lno, "e-count")? as usize;
    let t = parse_u32(toks[1], lno, "t-count")? as usize;
    PairContext::new(e, t)
}

/// All lines of a section parsed as pair elements.
pub fn pair_lines(ctx: &PairContext, sec: &Section) -> Result<Vec<PairElement>> {
    sec.lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_pair_element_at(l, sec.line0 + i, ctx))
        .collect()
}

/// A single pair element from a one-line section.
pub fn pair_line(ctx: &PairContext, sec: &Section) -> Result<PairElement> {
    let (line, lno) = single_line(sec)?;
    parse_pair_element_at(line, lno, ctx)
}

/// One comma-separated tuple of pair elements.
pub fn pair_tuple(ctx: &PairContext, line: &str, lno: usize) -> Result<Vec<PairElement>> {
    split_top_commas(strip_outer_parens(line))
        .iter()
        .map(|t| parse_pair_element_at(t, lno, ctx))
        .collect()
}

/// The optional `[base]` section: a single line of named e-variables (or
/// `-`), absent meaning the rationals.
pub fn base_field(ctx: &PairContext, job: &JobSpec) -> Result<BaseField> {
    let Some(sec) = job.section("base") else {
        return Ok(BaseField::rationals());
    };
    let (line, lno) = single_line(sec)?;
    if line.trim() == "-" {
        return Ok(BaseField::rationals());
    }
    let names = ctx.e_names();
    let mut indices = Vec::new();
    for tok in line.split_whitespace() {
        let i = names
            .iter()
            .position(|n| n == tok)
            .ok_or_else(|| perr(lno, format!("{tok:?} is not an e-variable of the model")))?;
        indices.push(i);
    }
    Ok(BaseField::with_e(indices))
}

/// A formula section parsed in the job's pair model.
pub fn formula_section(ctx: &PairContext, job: &JobSpec, name: &str) -> Result<TameFormula> {
    let sec = require_section(job, name)?;
    parse_tame_formula(ctx, &sec.lines, sec.line0)
}
