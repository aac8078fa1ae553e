//! Sparse multivariate polynomials over an exact coefficient field.
//!
//! Terms are kept sorted descending under the ring's monomial order with no
//! zero coefficients, so equal polynomials have identical representations
//! and every algorithm downstream (division, Buchberger, linear algebra on
//! graded pieces) is deterministic.
//!
//! The module also provides primitive-PRS multivariate gcd and exact
//! division over the rationals; these back the canonical reduced form of
//! the rational-function scalars.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::monomial::Monomial;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    /// `(monomial, coefficient)` pairs, sorted descending, no zeros.
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(ring: Arc<Ring>) -> Self {
        Polynomial { ring, terms: Vec::new() }
    }

    pub fn one(ring: Arc<Ring>) -> Self {
        let c = ring.field().one();
        Polynomial::constant(ring, c)
    }

    pub fn constant(ring: Arc<Ring>, c: Scalar) -> Self {
        if c.is_zero() {
            Polynomial::zero(ring)
        } else {
            Polynomial { ring, terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(ring: Arc<Ring>, v: u32) -> Self {
        let c = ring.field().one();
        Polynomial { ring, terms: vec![(Monomial::var(v), c)] }
    }

    pub fn monomial(ring: Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            Polynomial::zero(ring)
        } else {
            Polynomial { ring, terms: vec![(m, c)] }
        }
    }

    /// Normalizing constructor: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: Arc<Ring>, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        let order = ring.order().clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut merged: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Polynomial { ring, terms: merged }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(ring: &Arc<Ring>, terms: &[(i64, &[(u32, u32)])]) -> Self {
        let list = terms
            .iter()
            .map(|&(c, pairs)| (Monomial::from_pairs(pairs), ring.field().from_i64(c)))
            .collect();
        Polynomial::from_terms(ring.clone(), list)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coeff_of(&self, m: &Monomial) -> Scalar {
        for (tm, c) in &self.terms {
            if tm == m {
                return c.clone();
            }
        }
        self.ring.field().zero()
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(
            *self.ring == *other.ring,
            "polynomial arithmetic across different rings"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring.clone());
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    /// Multiplication by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring.clone());
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let one = self.ring.field().one();
        self.mul_term(m, &one)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.ring.clone());
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                prods.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Polynomial::from_terms(self.ring.clone(), prods)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.ring.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient; identity on the zero polynomial.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Total degree over all variables (None for the zero polynomial).
    pub fn total_deg(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    /// Largest degree over the given variables.
    pub fn deg_over(&self, vars: &[u32]) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg_over(vars)).max()
    }

    /// If every term has the same degree over `vars`, returns it.
    /// The zero polynomial counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self, vars: &[u32]) -> Option<u32> {
        let mut it = self.terms.iter().map(|(m, _)| m.deg_over(vars));
        let first = match it.next() {
            None => return Some(0),
            Some(d) => d,
        };
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: u32) -> Polynomial {
        let field = self.ring.field().clone();
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exp(v);
                if e == 0 {
                    return None;
                }
                let dm = m.try_div(&Monomial::var(v)).expect("positive exponent");
                Some((dm, c.mul(&field.from_i64(e as i64))))
            })
            .collect();
        Polynomial::from_terms(self.ring.clone(), terms)
    }

    /// Substitutes a polynomial for variable `v`.
    pub fn substitute(&self, v: u32, value: &Polynomial) -> Polynomial {
        self.assert_same_ring(value);
        // group terms by the exponent of v to reuse powers
        let mut by_exp: BTreeMap<u32, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let rest = m.try_div(&Monomial::var_pow(v, e)).expect("exponent split");
            by_exp.entry(e).or_default().push((rest, c.clone()));
        }
        let mut acc = Polynomial::zero(self.ring.clone());
        let mut power = Polynomial::one(self.ring.clone());
        let mut cur_e = 0u32;
        for (e, terms) in by_exp {
            while cur_e < e {
                power = power.mul(value);
                cur_e += 1;
            }
            let part = Polynomial::from_terms(self.ring.clone(), terms);
            acc = acc.add(&part.mul(&power));
        }
        acc
    }

    /// Substitutes scalars for several variables at once.
    pub fn eval_vars(&self, assignment: &[(u32, Scalar)]) -> Polynomial {
        let mut out = self.clone();
        for (v, s) in assignment {
            let val = Polynomial::constant(self.ring.clone(), s.clone());
            out = out.substitute(*v, &val);
        }
        out
    }

    /// Full evaluation to a scalar; every variable of the support must be
    /// covered by `assignment`.
    pub fn eval_full(&self, assignment: &[(u32, Scalar)]) -> Result<Scalar> {
        let out = self.eval_vars(assignment);
        if out.is_constant() {
            Ok(out
                .terms
                .first()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| self.ring.field().zero()))
        } else {
            Err(Error::Invalid("evaluation left free variables".into()))
        }
    }

    /// Groups terms by their sub-monomial over `part_vars`: returns
    /// `(part, cofactor)` pairs, parts sorted descending, cofactors carry
    /// the remaining variables.
    pub fn collect_by(&self, part_vars: &[u32]) -> Vec<(Monomial, Polynomial)> {
        let mut groups: Vec<(Monomial, Vec<(Monomial, Scalar)>)> = Vec::new();
        for (m, c) in &self.terms {
            let part_pairs: Vec<(u32, u32)> = m
                .pairs()
                .iter()
                .copied()
                .filter(|&(v, _)| part_vars.contains(&v))
                .collect();
            let part = Monomial::from_pairs(&part_pairs);
            let rest = m.try_div(&part).expect("part divides");
            match groups.iter_mut().find(|(p, _)| *p == part) {
                Some((_, list)) => list.push((rest, c.clone())),
                None => groups.push((part, vec![(rest, c.clone())])),
            }
        }
        let order = self.ring.order().clone();
        groups.sort_by(|a, b| order.cmp(&b.0, &a.0));
        groups
            .into_iter()
            .map(|(p, list)| (p, Polynomial::from_terms(self.ring.clone(), list)))
            .collect()
    }

    /// Homogenizes with respect to the degree over `vars`, using `hvar`
    /// (which must not occur) to pad every term up to the maximum degree.
    pub fn homogenize(&self, hvar: u32, vars: &[u32]) -> Polynomial {
        let target = self.deg_over(vars).unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let pad = target - m.deg_over(vars);
                (m.mul(&Monomial::var_pow(hvar, pad)), c.clone())
            })
            .collect();
        Polynomial::from_terms(self.ring.clone(), terms)
    }

    /// Moves the polynomial to a ring with the same variable names at the
    /// same indices (extension or different order); re-sorts terms.
    pub fn transfer(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        for (m, _) in &self.terms {
            for v in m.vars() {
                if v as usize >= target.num_vars()
                    || target.var_name(v) != self.ring.var_name(v)
                {
                    return Err(Error::RingMismatch(format!(
                        "variable {} does not transfer",
                        self.ring.var_name(v)
                    )));
                }
            }
        }
        Ok(Polynomial::from_terms(target.clone(), self.terms.clone()))
    }

    /// Moves the polynomial into `target`, matching variables by name.
    pub fn remap_by_name(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        let mut table: BTreeMap<u32, u32> = BTreeMap::new();
        for (m, _) in &self.terms {
            for v in m.vars() {
                if !table.contains_key(&v) {
                    let name = self.ring.var_name(v);
                    let idx = target
                        .var_index(name)
                        .ok_or_else(|| Error::RingMismatch(format!("no variable {name}")))?;
                    table.insert(v, idx);
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(&|v| table[&v]), c.clone()))
            .collect();
        Ok(Polynomial::from_terms(target.clone(), terms))
    }

    /// Applies a scalar map to every coefficient (e.g. a field change).
    pub fn map_coeffs(
        &self,
        target: Arc<Ring>,
        f: &dyn Fn(&Scalar) -> Scalar,
    ) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// The set of variables occurring in the polynomial, ascending.
    pub fn support_vars(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            // pull the sign out of rational coefficients for readability
            let (neg, mag) = match c {
                Scalar::Rat(q) if q.is_negative() => (true, Scalar::Rat(-q.clone())),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mstr = self.ring.format_monomial(m);
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mstr}")?;
            } else {
                write!(f, "{mag}*{mstr}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gcd machinery over the rationals (used by the rational-function scalars)
// ---------------------------------------------------------------------------

/// Exact division: `Some(q)` with `f = q * g` when `g` divides `f`.
pub fn exact_div(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let ring = f.ring().clone();
    let mut rem = f.clone();
    let mut quo = Polynomial::zero(ring.clone());
    let glm = g.leading_monomial().unwrap().clone();
    let glc = g.leading_coeff().unwrap().clone();
    while let Some(rlm) = rem.leading_monomial() {
        let m = rlm.try_div(&glm)?;
        let c = rem
            .leading_coeff()
            .unwrap()
            .div(&glc)
            .expect("nonzero leading coefficient");
        let t = Polynomial::monomial(ring.clone(), m.clone(), c.clone());
        quo = quo.add(&t);
        rem = rem.sub(&g.mul_term(&m, &c));
    }
    Some(quo)
}

fn deg_in(f: &Polynomial, v: u32) -> u32 {
    f.terms().iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
}

/// Writes `f` as a univariate polynomial in `v`: map exponent → cofactor.
fn uni_parts(f: &Polynomial, v: u32) -> BTreeMap<u32, Polynomial> {
    let mut parts: BTreeMap<u32, Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e = m.exp(v);
        let rest = m.try_div(&Monomial::var_pow(v, e)).expect("exponent split");
        parts.entry(e).or_default().push((rest, c.clone()));
    }
    parts
        .into_iter()
        .map(|(e, list)| (e, Polynomial::from_terms(f.ring().clone(), list)))
        .collect()
}

fn uni_lead(f: &Polynomial, v: u32) -> Polynomial {
    let d = deg_in(f, v);
    let parts = uni_parts(f, v);
    parts.get(&d).cloned().unwrap_or_else(|| Polynomial::zero(f.ring().clone()))
}

/// Pseudo-remainder of `a` by `b` with respect to variable `v`.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: u32) -> Polynomial {
    let db = deg_in(b, v);
    let lb = uni_lead(b, v);
    let mut r = a.clone();
    while !r.is_zero() && deg_in(&r, v) >= db {
        let dr = deg_in(&r, v);
        let lr = uni_lead(&r, v);
        let shift = Monomial::var_pow(v, dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_monomial(&shift));
    }
    r
}

/// Content of `f` viewed as univariate in `v`: gcd of the cofactors.
fn content_wrt(f: &Polynomial, v: u32) -> Polynomial {
    let mut acc = Polynomial::zero(f.ring().clone());
    for (_, part) in uni_parts(f, v) {
        acc = gcd(&acc, &part);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Monic multivariate gcd over the rationals via primitive
/// pseudo-remainder sequences.  `gcd(0, 0) = 0`; otherwise the result is
/// monic under the ring order.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    assert!(
        matches!(f.ring().field(), FieldKind::Rationals),
        "polynomial gcd requires rational coefficients"
    );
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.ring().clone());
    }
    // main variable: the largest index present in either polynomial
    let v = f
        .support_vars()
        .into_iter()
        .chain(g.support_vars())
        .max()
        .expect("nonconstant polynomials have variables");

    let cf = content_wrt(f, v);
    let cg = content_wrt(g, v);
    let c = gcd(&cf, &cg);
    let mut a = exact_div(f, &cf).expect("content divides").monic();
    let mut b = exact_div(g, &cg).expect("content divides").monic();
    if deg_in(&a, v) < deg_in(&b, v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            let cb = content_wrt(&b, v);
            let prim = exact_div(&b, &cb).expect("content divides");
            return c.mul(&prim).monic();
        }
        if deg_in(&r, v) == 0 {
            return c.monic();
        }
        let cr = content_wrt(&r, v);
        a = b;
        b = exact_div(&r, &cr).expect("content divides").monic();
    }
}
