//! A desk-scale model of a pair of fields `E ⊆ K` presented by rational
//! functions, together with formula-level operations on it.
//!
//! The model fixes two blocks of transcendentals: `e`-variables generate the
//! small field `E` (up to algebraic closure) and `t`-variables are generic
//! over it.  Elements of `K` are rational functions in both blocks
//! ([`PairElement`]).  Membership of an expression in `E` is decided by
//! expanding along `t`-monomials: the expression lies in `E` exactly when
//! every `t`-coefficient constraint can be met, which turns quantification
//! "there is a nonzero witness tuple over `E`" ([`TameFormula`]) into a
//! projective consistency question over the fraction field `Q(e)` — an ideal
//! saturated by the witness variables is consistent iff it is not the unit
//! ideal.
//!
//! On top of the evaluator the module provides the structural operations:
//! λ-coefficient extraction ([`lambda_eval`]), conjunction of witness
//! formulas via a Segre merge ([`tame_conjoin`]), reduction of a witness
//! formula to a polynomial system on `E`-points ([`tame_to_zariski_on_e`]),
//! vanishing-ideal invariants and ranks ([`lambda_field_generators`],
//! [`transcendence_degree`], [`rm_rank`]), three formula emitters
//! ([`emit_theta`], [`emit_chi`], [`emit_minimal_tame`]), and parameter
//! rewrites ([`rewrite_lambda_elim`], [`disjoin_conjugates`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::index_subsets;
use crate::field::{FieldKind, Scalar};
use crate::groebner::Ideal;
use crate::hilbert::hilbert_polynomial;
use crate::hilbscheme::{hilbert_scheme_data, point_from_ideal, poly_det};
use crate::matrix::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{exact_div, Polynomial};
use crate::ring::Ring;

/// Cap on the number of rank-window minors expanded by `emit_minimal_tame`.
const MINOR_CAP: usize = 5_000;

// ---------------------------------------------------------------------------
// The ambient pair
// ---------------------------------------------------------------------------

/// The ambient pair of fields, presented by two blocks of transcendentals
/// over the rationals: `e1..em` (generators of the small field) and
/// `t1..ts` (generic over it).
#[derive(Debug, Clone)]
pub struct PairContext {
    ring: Arc<Ring>,   // Q[e1..em, t1..ts], blocks "e" and "t"
    e_ring: Arc<Ring>, // Q[e1..em], block "e"; e-indices agree with `ring`
    e_count: usize,
    t_count: usize,
}

impl PartialEq for PairContext {
    fn eq(&self, other: &Self) -> bool {
        self.e_count == other.e_count && self.t_count == other.t_count
    }
}

impl Eq for PairContext {}

fn make_ring(field: FieldKind, blocks: &[(&str, &[String])]) -> Result<Arc<Ring>> {
    let views: Vec<(&str, Vec<&str>)> = blocks
        .iter()
        .map(|(n, vs)| (*n, vs.iter().map(String::as_str).collect()))
        .collect();
    let slices: Vec<(&str, &[&str])> =
        views.iter().map(|(n, vs)| (*n, vs.as_slice())).collect();
    Ring::new(field, &slices)
}

impl PairContext {
    pub fn new(e_count: usize, t_count: usize) -> Result<PairContext> {
        if e_count == 0 && t_count == 0 {
            return Err(Error::Invalid("a pair needs at least one variable".into()));
        }
        let e_names: Vec<String> = (1..=e_count).map(|i| format!("e{i}")).collect();
        let t_names: Vec<String> = (1..=t_count).map(|i| format!("t{i}")).collect();
        let ring =
            make_ring(FieldKind::Rationals, &[("e", &e_names), ("t", &t_names)])?;
        let e_ring = make_ring(FieldKind::Rationals, &[("e", &e_names)])?;
        Ok(PairContext { ring, e_ring, e_count, t_count })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn e_ring(&self) -> &Arc<Ring> {
        &self.e_ring
    }

    pub fn e_count(&self) -> usize {
        self.e_count
    }

    pub fn t_count(&self) -> usize {
        self.t_count
    }

    /// The fraction field Q(e1..em) used as the coefficient field of all
    /// witness-system computations.
    pub fn e_fractions(&self) -> FieldKind {
        FieldKind::Fractions(self.e_ring.clone())
    }

    pub fn e_names(&self) -> Vec<String> {
        (0..self.e_count).map(|i| self.ring.var_name(i as u32).to_string()).collect()
    }

    pub fn t_names(&self) -> Vec<String> {
        (0..self.t_count)
            .map(|i| self.ring.var_name((self.e_count + i) as u32).to_string())
            .collect()
    }

    fn t_indices(&self) -> Vec<u32> {
        (self.e_count as u32..(self.e_count + self.t_count) as u32).collect()
    }

    /// The i-th e-generator (0-based; `e_var(0)` is `e1`).
    pub fn e_var(&self, i: usize) -> Result<PairElement> {
        if i >= self.e_count {
            return Err(Error::IndexMismatch(format!("no e-variable with index {i}")));
        }
        self.element(Polynomial::var(self.ring.clone(), i as u32))
    }

    /// The i-th t-generator (0-based; `t_var(0)` is `t1`).
    pub fn t_var(&self, i: usize) -> Result<PairElement> {
        if i >= self.t_count {
            return Err(Error::IndexMismatch(format!("no t-variable with index {i}")));
        }
        self.element(Polynomial::var(self.ring.clone(), (self.e_count + i) as u32))
    }

    pub fn from_int(&self, n: i64) -> PairElement {
        let num = Polynomial::constant(self.ring.clone(), Scalar::from_int(n));
        PairElement { value: Scalar::from_fraction(num, Polynomial::one(self.ring.clone())) }
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> PairElement {
        let num = Polynomial::constant(self.ring.clone(), Scalar::from_ratio(n, d));
        PairElement { value: Scalar::from_fraction(num, Polynomial::one(self.ring.clone())) }
    }

    /// Builds an element from a numerator polynomial (denominator 1).
    pub fn element(&self, num: Polynomial) -> Result<PairElement> {
        self.fraction(num, Polynomial::one(self.ring.clone()))
    }

    /// Builds the reduced element `num/den`; both polynomials must live in
    /// the pair ring and `den` must be nonzero.
    pub fn fraction(&self, num: Polynomial, den: Polynomial) -> Result<PairElement> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = num.remap_by_name(&self.ring)?;
        let den = den.remap_by_name(&self.ring)?;
        Ok(PairElement { value: Scalar::from_fraction(num, den) })
    }

    /// Rebuilds a pair element from a scalar over the e-function field.
    fn from_e_scalar(&self, s: &Scalar) -> Result<PairElement> {
        match s {
            Scalar::Rat(q) => {
                let num =
                    Polynomial::constant(self.ring.clone(), Scalar::Rat(q.clone()));
                Ok(PairElement {
                    value: Scalar::from_fraction(num, Polynomial::one(self.ring.clone())),
                })
            }
            Scalar::Fn(f) => {
                let num = f.num.remap_by_name(&self.ring)?;
                let den = f.den.remap_by_name(&self.ring)?;
                Ok(PairElement { value: Scalar::from_fraction(num, den) })
            }
            Scalar::Mod { .. } => {
                Err(Error::FieldMismatch("pair elements live in characteristic 0".into()))
            }
        }
    }
}

/// An element of the big field `K = Q(e1..em, t1..ts)`, stored as a reduced
/// fraction with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairElement {
    value: Scalar, // always Scalar::Fn over the pair ring
}

impl PairElement {
    pub fn num(&self) -> &Polynomial {
        &self.value.as_fraction().expect("pair elements are fractions").num
    }

    pub fn den(&self) -> &Polynomial {
        &self.value.as_fraction().expect("pair elements are fractions").den
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True when neither numerator nor denominator mentions a t-variable,
    /// i.e. the element lies in the presented part of the small field.
    pub fn is_e_only(&self, ctx: &PairContext) -> bool {
        let m = ctx.e_count as u32;
        self.num().support_vars().iter().all(|&v| v < m)
            && self.den().support_vars().iter().all(|&v| v < m)
    }

    /// The element as a scalar of the e-function field; requires `is_e_only`.
    fn e_scalar(&self, ctx: &PairContext) -> Result<Scalar> {
        if !self.is_e_only(ctx) {
            return Err(Error::ShapeMismatch(
                "element involves t-variables, not in the e-part".into(),
            ));
        }
        let num = self.num().remap_by_name(&ctx.e_ring)?;
        let den = self.den().remap_by_name(&ctx.e_ring)?;
        Ok(Scalar::from_fraction(num, den))
    }

    pub fn add(&self, other: &PairElement) -> PairElement {
        PairElement { value: self.value.add(&other.value) }
    }

    pub fn sub(&self, other: &PairElement) -> PairElement {
        PairElement { value: self.value.sub(&other.value) }
    }

    pub fn mul(&self, other: &PairElement) -> PairElement {
        PairElement { value: self.value.mul(&other.value) }
    }

    pub fn neg(&self) -> PairElement {
        PairElement { value: self.value.neg() }
    }

    pub fn div(&self, other: &PairElement) -> Result<PairElement> {
        Ok(PairElement { value: self.value.div(&other.value)? })
    }

    pub fn pow(&self, e: u32) -> PairElement {
        PairElement { value: self.value.pow(e) }
    }
}

impl fmt::Display for PairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// ---------------------------------------------------------------------------
// Base-field descriptors
// ---------------------------------------------------------------------------

/// A base field for rank and emitter computations: the rationals, or the
/// rationals extended by some named e-generators.  Both choices are closed
/// under λ-coefficients by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    /// Indices (0-based) of the adjoined e-generators.
    WithE(Vec<usize>),
}

impl BaseField {
    pub fn rationals() -> BaseField {
        BaseField::Rationals
    }

    pub fn with_e(mut indices: Vec<usize>) -> BaseField {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            BaseField::Rationals
        } else {
            BaseField::WithE(indices)
        }
    }

    pub fn named_indices(&self) -> &[usize] {
        match self {
            BaseField::Rationals => &[],
            BaseField::WithE(v) => v,
        }
    }

    fn validate(&self, ctx: &PairContext) -> Result<()> {
        for &i in self.named_indices() {
            if i >= ctx.e_count {
                return Err(Error::UnsupportedBase(format!(
                    "base names e-generator {i}, but the pair has only {}",
                    ctx.e_count
                )));
            }
        }
        Ok(())
    }
}

/// True when the scalar (over the e-function field) lies in the base field.
fn scalar_in_base(c: &Scalar, named: &[usize]) -> bool {
    match c {
        Scalar::Rat(_) => true,
        Scalar::Fn(f) => {
            let ok = |p: &Polynomial| {
                p.support_vars().iter().all(|&v| named.contains(&(v as usize)))
            };
            ok(&f.num) && ok(&f.den)
        }
        Scalar::Mod { .. } => false,
    }
}

// ---------------------------------------------------------------------------
// Cross-ring plumbing
// ---------------------------------------------------------------------------

/// Rebuilds `p` in `target` applying `table` to every variable index.
fn remap_with(p: &Polynomial, target: &Arc<Ring>, table: &[u32]) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| (m.remap(&|v| table[v as usize]), c.clone()))
        .collect();
    Polynomial::from_terms(target.clone(), terms)
}

/// Moves a polynomial over the rationals whose e-variables sit at indices
/// `0..m` into a ring over the e-function field: the e-part of every term
/// becomes a coefficient, the remaining variables are remapped by `map`.
fn lift_e_coeffs(
    p: &Polynomial,
    e_ring: &Arc<Ring>,
    target: &Arc<Ring>,
    map: &dyn Fn(u32) -> u32,
) -> Polynomial {
    let m = e_ring.num_vars() as u32;
    let one = Polynomial::one(e_ring.clone());
    let terms = p
        .terms()
        .iter()
        .map(|(mono, c)| {
            let mut e_pairs = Vec::new();
            let mut rest = Vec::new();
            for &(v, ex) in mono.pairs() {
                if v < m {
                    e_pairs.push((v, ex));
                } else {
                    rest.push((map(v), ex));
                }
            }
            let e_poly = Polynomial::monomial(
                e_ring.clone(),
                Monomial::from_pairs(&e_pairs),
                c.clone(),
            );
            let sc = Scalar::from_fraction(e_poly, one.clone());
            (Monomial::from_pairs(&rest), sc)
        })
        .collect();
    Polynomial::from_terms(target.clone(), terms)
}

/// `c * mult` as a polynomial over the e-ring; the denominator of `c` must
/// divide `mult` exactly.
fn scalar_times_poly(c: &Scalar, mult: &Polynomial) -> Result<Polynomial> {
    match c {
        Scalar::Rat(_) => Ok(mult.scale(c)),
        Scalar::Fn(f) => {
            let q = exact_div(mult, &f.den).ok_or(Error::DivisionByZero)?;
            Ok(f.num.mul(&q))
        }
        Scalar::Mod { .. } => {
            Err(Error::FieldMismatch("expected a characteristic-0 scalar".into()))
        }
    }
}

/// Substitutes `num/den` for the variable `v` in `q`, clearing denominators
/// by `den^d` where `d` is the largest power of `v` in `q`.  The result is a
/// polynomial again; as an equation it is the original scaled by the nonzero
/// factor `den^d`.
fn substitute_cleared(
    q: &Polynomial,
    v: u32,
    num: &Polynomial,
    den: &Polynomial,
) -> Polynomial {
    let d = q.terms().iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0);
    if d == 0 {
        return q.clone();
    }
    let ring = q.ring().clone();
    let mut num_pow = vec![Polynomial::one(ring.clone())];
    let mut den_pow = vec![Polynomial::one(ring.clone())];
    for k in 1..=d as usize {
        num_pow.push(num_pow[k - 1].mul(num));
        den_pow.push(den_pow[k - 1].mul(den));
    }
    let mut acc = Polynomial::zero(ring.clone());
    for (mono, c) in q.terms() {
        let k = mono.exp(v) as usize;
        let rest: Vec<(u32, u32)> =
            mono.pairs().iter().copied().filter(|&(w, _)| w != v).collect();
        let base = Polynomial::monomial(ring.clone(), Monomial::from_pairs(&rest), c.clone());
        acc = acc.add(&base.mul(&num_pow[k]).mul(&den_pow[d as usize - k]));
    }
    acc
}

/// Expands every variable of `p` through `map` and sums the products; used
/// to compose template polynomials with substitution polynomials.
fn substitute_all(
    p: &Polynomial,
    target: &Arc<Ring>,
    map: &dyn Fn(u32) -> Polynomial,
) -> Polynomial {
    let mut acc = Polynomial::zero(target.clone());
    for (mono, c) in p.terms() {
        let mut prod = Polynomial::constant(target.clone(), c.clone());
        for &(v, e) in mono.pairs() {
            prod = prod.mul(&map(v).pow(e));
        }
        acc = acc.add(&prod);
    }
    acc
}

// ---------------------------------------------------------------------------
// λ-coefficients
// ---------------------------------------------------------------------------

/// Expresses `a0` as an `E`-linear combination of `basis`, if possible.
///
/// Clears all denominators, expands along t-monomials and solves the linear
/// system over Q(e).  Returns the unique coefficient vector when the basis
/// is E-linearly independent and `a0` lies in its span; otherwise a vector
/// of zeros.
pub fn lambda_eval(
    ctx: &PairContext,
    a0: &PairElement,
    basis: &[PairElement],
) -> Result<Vec<PairElement>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let zeros = || Ok(vec![ctx.from_int(0); basis.len()]);
    // Common denominator and cleared numerators.
    let mut den = a0.den().clone();
    for b in basis {
        den = den.mul(b.den());
    }
    let cleared = |p: &PairElement| -> Result<Polynomial> {
        let cof = exact_div(&den, p.den()).ok_or(Error::DivisionByZero)?;
        Ok(p.num().mul(&cof))
    };
    let n0 = cleared(a0)?;
    let cols: Vec<Polynomial> =
        basis.iter().map(cleared).collect::<Result<Vec<_>>>()?;
    // Expand along t-monomials.
    let tvars = ctx.t_indices();
    let to_parts = |p: &Polynomial| -> Result<BTreeMap<Vec<(u32, u32)>, Scalar>> {
        let mut out = BTreeMap::new();
        for (mono, cof) in p.collect_by(&tvars) {
            let e_poly = cof.remap_by_name(&ctx.e_ring)?;
            let sc = Scalar::from_fraction(e_poly, Polynomial::one(ctx.e_ring.clone()));
            out.insert(mono.pairs().to_vec(), sc);
        }
        Ok(out)
    };
    let rhs_parts = to_parts(&n0)?;
    let col_parts: Vec<BTreeMap<Vec<(u32, u32)>, Scalar>> =
        cols.iter().map(to_parts).collect::<Result<Vec<_>>>()?;
    let mut keys: BTreeSet<Vec<(u32, u32)>> = rhs_parts.keys().cloned().collect();
    for cp in &col_parts {
        keys.extend(cp.keys().cloned());
    }
    let fe = ctx.e_fractions();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for key in &keys {
        let row: Vec<Scalar> = col_parts
            .iter()
            .map(|cp| cp.get(key).cloned().unwrap_or_else(|| fe.zero()))
            .collect();
        rows.push(row);
        rhs.push(rhs_parts.get(key).cloned().unwrap_or_else(|| fe.zero()));
    }
    let mat = Matrix::from_rows(fe, rows)?;
    match mat.solve(&rhs)? {
        Some(sol) if mat.kernel_basis().is_empty() => {
            sol.iter().map(|s| ctx.from_e_scalar(s)).collect()
        }
        _ => zeros(),
    }
}

// ---------------------------------------------------------------------------
// Tame formulas
// ---------------------------------------------------------------------------

/// One block of witness variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaBlock {
    pub name: String,
    pub arity: usize,
    /// When set, the witness tuple is required to be nonzero (it ranges over
    /// the corresponding projective space).
    pub projective: bool,
}

impl ZetaBlock {
    pub fn projective(name: &str, arity: usize) -> ZetaBlock {
        ZetaBlock { name: name.to_string(), arity, projective: true }
    }

    fn var_names(&self) -> Vec<String> {
        (0..self.arity).map(|j| format!("{}_{}", self.name, j)).collect()
    }
}

/// An existential witness formula: free variables `x`, blocks of witness
/// variables ζ quantified over the small field (each block optionally
/// required nonzero), equations `q_j(x, ζ) = 0` homogeneous in every block,
/// and side constraints `γ(ζ) = 0` over the e-part only.
#[derive(Debug, Clone)]
pub struct TameFormula {
    ctx: PairContext,
    ring: Arc<Ring>,
    x_names: Vec<String>,
    blocks: Vec<ZetaBlock>,
    polys: Vec<Polynomial>,
    gamma: Vec<Polynomial>,
}

impl PartialEq for TameFormula {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.x_names == other.x_names
            && self.blocks == other.blocks
            && self.polys == other.polys
            && self.gamma == other.gamma
    }
}

impl Eq for TameFormula {}

/// The ring `Q[e.., t.., x.., ζ-blocks..]` a formula's polynomials live in.
fn formula_ring(
    ctx: &PairContext,
    x_names: &[String],
    blocks: &[ZetaBlock],
) -> Result<Arc<Ring>> {
    let e_names = ctx.e_names();
    let t_names = ctx.t_names();
    let mut owned: Vec<(String, Vec<String>)> = vec![
        ("e".to_string(), e_names),
        ("t".to_string(), t_names),
        ("x".to_string(), x_names.to_vec()),
    ];
    for b in blocks {
        owned.push((b.name.clone(), b.var_names()));
    }
    let views: Vec<(&str, &[String])> =
        owned.iter().map(|(n, vs)| (n.as_str(), vs.as_slice())).collect();
    make_ring(FieldKind::Rationals, &views)
}

impl TameFormula {
    /// Validates and canonicalizes a formula: distinct block names, per-block
    /// homogeneity of every equation and constraint, and constraints free of
    /// `t` and `x`.
    pub fn new(
        ctx: PairContext,
        x_names: Vec<String>,
        blocks: Vec<ZetaBlock>,
        polys: Vec<Polynomial>,
        gamma: Vec<Polynomial>,
    ) -> Result<TameFormula> {
        for (i, b) in blocks.iter().enumerate() {
            if b.arity == 0 {
                return Err(Error::Invalid(format!("witness block {} has arity 0", b.name)));
            }
            if ["e", "t", "x"].contains(&b.name.as_str())
                || blocks[..i].iter().any(|o| o.name == b.name)
            {
                return Err(Error::VariableClash(b.name.clone()));
            }
        }
        let ring = formula_ring(&ctx, &x_names, &blocks)?;
        let move_in = |ps: Vec<Polynomial>| -> Result<Vec<Polynomial>> {
            Ok(ps
                .into_iter()
                .map(|p| p.remap_by_name(&ring))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| !p.is_zero())
                .collect())
        };
        let polys = move_in(polys)?;
        let gamma = move_in(gamma)?;
        let block_vars: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| {
                let bi = ring.block_index(&b.name).expect("block exists");
                ring.block_vars(bi)
            })
            .collect();
        for p in polys.iter().chain(gamma.iter()) {
            for (b, vars) in blocks.iter().zip(&block_vars) {
                if p.homogeneous_degree(vars).is_none() {
                    return Err(Error::NotBlockHomogeneous(format!(
                        "equation is not homogeneous in witness block {}",
                        b.name
                    )));
                }
            }
        }
        // Side constraints may only mention witness variables and e-generators.
        let m = ctx.e_count as u32;
        let zeta_start = (ctx.e_count + ctx.t_count + x_names.len()) as u32;
        for g in &gamma {
            if g.support_vars().iter().any(|&v| v >= m && v < zeta_start) {
                return Err(Error::Invalid(
                    "side constraints may only use witness variables and e-generators"
                        .into(),
                ));
            }
        }
        Ok(TameFormula { ctx, ring, x_names, blocks, polys, gamma })
    }

    /// The formula with no equations and no witnesses: always true.
    pub fn tautology(ctx: PairContext, x_names: Vec<String>) -> Result<TameFormula> {
        TameFormula::new(ctx, x_names, Vec::new(), Vec::new(), Vec::new())
    }

    pub fn is_tautology(&self) -> bool {
        self.polys.is_empty() && self.gamma.is_empty()
    }

    /// The ring a formula over these free variables and blocks lives in;
    /// useful for building equations before calling [`TameFormula::new`].
    pub fn build_ring(
        ctx: &PairContext,
        x_names: &[String],
        blocks: &[ZetaBlock],
    ) -> Result<Arc<Ring>> {
        formula_ring(ctx, x_names, blocks)
    }

    pub fn ctx(&self) -> &PairContext {
        &self.ctx
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn x_names(&self) -> &[String] {
        &self.x_names
    }

    pub fn blocks(&self) -> &[ZetaBlock] {
        &self.blocks
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn gamma(&self) -> &[Polynomial] {
        &self.gamma
    }

    fn x_var(&self, i: usize) -> u32 {
        (self.ctx.e_count + self.ctx.t_count + i) as u32
    }

    fn zeta_vars(&self, block: usize) -> Vec<u32> {
        let bi = self.ring.block_index(&self.blocks[block].name).expect("block exists");
        self.ring.block_vars(bi)
    }

    fn t_indices(&self) -> Vec<u32> {
        self.ctx.t_indices()
    }
}

impl fmt::Display for TameFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x_names.is_empty() {
            writeln!(f, "free: -")?;
        } else {
            writeln!(f, "free: {}", self.x_names.join(", "))?;
        }
        for b in &self.blocks {
            writeln!(
                f,
                "block {}: arity {}{}",
                b.name,
                b.arity,
                if b.projective { ", nonzero" } else { "" }
            )?;
        }
        for p in &self.polys {
            writeln!(f, "eq: {p}")?;
        }
        for g in &self.gamma {
            writeln!(f, "locus: {g}")?;
        }
        if self.is_tautology() {
            writeln!(f, "true")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// The witness system of a formula at a point: equations over Q(e) in the
/// witness variables only, or a directly decided value when the formula has
/// no witness variables.
enum WitnessSystem {
    Decided(bool),
    System {
        ring: Arc<Ring>, // witness blocks over Q(e)
        polys: Vec<Polynomial>,
        blocks: Vec<(bool, Vec<u32>)>, // projective flag, variable indices
        zeta_base: u32,                // first witness index in the formula ring
    },
}

fn witness_system(phi: &TameFormula, b: &[PairElement]) -> Result<WitnessSystem> {
    if b.len() != phi.x_names.len() {
        return Err(Error::ShapeMismatch(format!(
            "formula has {} free variables, got {} values",
            phi.x_names.len(),
            b.len()
        )));
    }
    for bi in b {
        if !bi.num().ring().same_frame(phi.ctx.ring()) {
            return Err(Error::RingMismatch(
                "value comes from a different pair context".into(),
            ));
        }
    }
    // Substitute the free variables, clearing denominators per equation.
    let mut subd = Vec::new();
    for q in &phi.polys {
        let mut cur = q.clone();
        for (i, bi) in b.iter().enumerate() {
            let num = bi.num().remap_by_name(&phi.ring)?;
            let den = bi.den().remap_by_name(&phi.ring)?;
            cur = substitute_cleared(&cur, phi.x_var(i), &num, &den);
        }
        subd.push(cur);
    }
    let total: usize = phi.blocks.iter().map(|z| z.arity).sum();
    if total == 0 {
        // No witnesses: every t-expanded equation must vanish identically,
        // and nonzero constraints over the transcendental e-generators never
        // vanish.
        let ok = subd.iter().all(|p| p.is_zero()) && phi.gamma.iter().all(|g| g.is_zero());
        return Ok(WitnessSystem::Decided(ok));
    }
    let zeta_ring = {
        let owned: Vec<(String, Vec<String>)> =
            phi.blocks.iter().map(|z| (z.name.clone(), z.var_names())).collect();
        let views: Vec<(&str, &[String])> =
            owned.iter().map(|(n, vs)| (n.as_str(), vs.as_slice())).collect();
        make_ring(phi.ctx.e_fractions(), &views)?
    };
    let zeta_base = phi.x_var(phi.x_names.len());
    let shift = |v: u32| v - zeta_base;
    let tvars = phi.t_indices();
    let mut polys = Vec::new();
    for p in &subd {
        for (_, cof) in p.collect_by(&tvars) {
            let lifted = lift_e_coeffs(&cof, &phi.ctx.e_ring, &zeta_ring, &shift);
            if !lifted.is_zero() {
                polys.push(lifted);
            }
        }
    }
    for g in &phi.gamma {
        let lifted = lift_e_coeffs(g, &phi.ctx.e_ring, &zeta_ring, &shift);
        if !lifted.is_zero() {
            polys.push(lifted);
        }
    }
    let blocks = phi
        .blocks
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let bi = zeta_ring.block_index(&z.name).expect("block exists");
            let _ = i;
            (z.projective, zeta_ring.block_vars(bi))
        })
        .collect();
    Ok(WitnessSystem::System { ring: zeta_ring, polys, blocks, zeta_base })
}

/// Saturates an ideal by each of the given variables and intersects the
/// results; for any ideal this is the saturation with respect to the
/// monomial set of those variables.
fn saturate_vars(i: &Ideal, vars: &[u32]) -> Result<Ideal> {
    let ring = i.ring().clone();
    let mut acc: Option<Ideal> = None;
    for &v in vars {
        let s = i.saturate_poly(&Polynomial::var(ring.clone(), v))?;
        acc = Some(match acc {
            None => s,
            Some(a) => a.intersect(&s)?,
        });
    }
    Ok(acc.unwrap_or_else(|| i.clone()))
}

fn solve_witness_system(
    ring: Arc<Ring>,
    polys: Vec<Polynomial>,
    blocks: &[(bool, Vec<u32>)],
    extra_saturation: Option<&Polynomial>,
) -> Result<bool> {
    let mut ideal = Ideal::new(ring, polys)?;
    if let Some(f) = extra_saturation {
        if !ideal.is_unit_ideal() {
            ideal = ideal.saturate_poly(f)?;
        }
    }
    for (projective, vars) in blocks {
        if *projective && !ideal.is_unit_ideal() {
            ideal = saturate_vars(&ideal, vars)?;
        }
    }
    Ok(!ideal.is_unit_ideal())
}

/// Decides whether `phi` holds at the tuple `b`: for every witness block
/// there is a tuple over the small field (nonzero when the block is
/// projective) satisfying all equations and side constraints.
pub fn tame_eval(phi: &TameFormula, b: &[PairElement]) -> Result<bool> {
    match witness_system(phi, b)? {
        WitnessSystem::Decided(v) => Ok(v),
        WitnessSystem::System { ring, polys, blocks, .. } => {
            solve_witness_system(ring, polys, &blocks, None)
        }
    }
}

/// Substitutes a value for one free variable, clearing denominators.
pub fn instantiate(
    phi: &TameFormula,
    x_name: &str,
    value: &PairElement,
) -> Result<TameFormula> {
    let pos = phi
        .x_names
        .iter()
        .position(|n| n == x_name)
        .ok_or_else(|| Error::ShapeMismatch(format!("no free variable {x_name}")))?;
    let var = phi.x_var(pos);
    let num = value.num().remap_by_name(&phi.ring)?;
    let den = value.den().remap_by_name(&phi.ring)?;
    let mut new_x = phi.x_names.clone();
    new_x.remove(pos);
    let new_ring = formula_ring(&phi.ctx, &new_x, &phi.blocks)?;
    let polys = phi
        .polys
        .iter()
        .map(|q| substitute_cleared(q, var, &num, &den).remap_by_name(&new_ring))
        .collect::<Result<Vec<_>>>()?;
    let gamma = phi
        .gamma
        .iter()
        .map(|g| g.remap_by_name(&new_ring))
        .collect::<Result<Vec<_>>>()?;
    TameFormula::new(phi.ctx.clone(), new_x, phi.blocks.clone(), polys, gamma)
}

// ---------------------------------------------------------------------------
// Conjunction via the Segre merge
// ---------------------------------------------------------------------------

fn fresh_block_names(taken: &mut BTreeSet<String>, arities: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < arities.len() {
        let cand = format!("w{k}");
        k += 1;
        let vars: Vec<String> =
            (0..arities[out.len()]).map(|j| format!("{cand}_{j}")).collect();
        if taken.contains(&cand) || vars.iter().any(|v| taken.contains(v)) {
            continue;
        }
        taken.insert(cand.clone());
        for v in vars {
            taken.insert(v);
        }
        out.push(cand);
    }
    out
}

struct MergeState {
    blocks: Vec<ZetaBlock>,
    ring: Arc<Ring>,
    polys: Vec<Polynomial>,
    gamma: Vec<Polynomial>,
}

/// Merges the first two witness blocks of the state into their Segre
/// product: ξ (arity p) and ζ (arity q) become w (arity p·q) standing for
/// w_{ij} = ξ_i ζ_j.  Equations are first balanced to equal degrees in both
/// blocks by multiplying with all monomials of the missing degree, then
/// every balanced term maps termwise onto w; the rank-one quadratic
/// relations of the Segre embedding are added as side constraints.
fn segre_step(
    ctx: &PairContext,
    x_names: &[String],
    state: MergeState,
    taken: &mut BTreeSet<String>,
) -> Result<MergeState> {
    let a = &state.blocks[0];
    let bblk = &state.blocks[1];
    if !a.projective || !bblk.projective {
        return Err(Error::Invalid(
            "the Segre merge needs nonzero-witness blocks".into(),
        ));
    }
    let (p, q) = (a.arity, bblk.arity);
    let merged_name = fresh_block_names(taken, &[p * q]).remove(0);
    let mut new_blocks =
        vec![ZetaBlock { name: merged_name.clone(), arity: p * q, projective: true }];
    new_blocks.extend(state.blocks[2..].iter().cloned());
    let new_ring = formula_ring(ctx, x_names, &new_blocks)?;

    let old_ring = &state.ring;
    let a_vars = {
        let bi = old_ring.block_index(&a.name).expect("block exists");
        old_ring.block_vars(bi)
    };
    let b_vars = {
        let bi = old_ring.block_index(&bblk.name).expect("block exists");
        old_ring.block_vars(bi)
    };
    let a_start = a_vars[0];
    let b_start = b_vars[0];
    let w_start = {
        let bi = new_ring.block_index(&merged_name).expect("block exists");
        new_ring.block_vars(bi)[0]
    };
    // Variables outside the two merged blocks keep their names.
    let mut table: Vec<Option<u32>> = vec![None; old_ring.num_vars()];
    for v in 0..old_ring.num_vars() as u32 {
        if a_vars.contains(&v) || b_vars.contains(&v) {
            continue;
        }
        table[v as usize] = new_ring.var_index(old_ring.var_name(v));
    }

    let map_poly = |f: &Polynomial| -> Result<Vec<Polynomial>> {
        let da = f
            .homogeneous_degree(&a_vars)
            .ok_or_else(|| Error::NotBlockHomogeneous(a.name.clone()))?;
        let db = f
            .homogeneous_degree(&b_vars)
            .ok_or_else(|| Error::NotBlockHomogeneous(bblk.name.clone()))?;
        let variants: Vec<Polynomial> = if da == db {
            vec![f.clone()]
        } else if da < db {
            monomials_of_degree(&a_vars, db - da, old_ring.order())
                .into_iter()
                .map(|m| f.mul_monomial(&m))
                .collect()
        } else {
            monomials_of_degree(&b_vars, da - db, old_ring.order())
                .into_iter()
                .map(|m| f.mul_monomial(&m))
                .collect()
        };
        let mut out = Vec::new();
        for var in variants {
            let terms = var
                .terms()
                .iter()
                .map(|(mono, c)| {
                    let mut alist: Vec<u32> = Vec::new();
                    let mut blist: Vec<u32> = Vec::new();
                    let mut rest: Vec<(u32, u32)> = Vec::new();
                    for &(v, e) in mono.pairs() {
                        if a_vars.contains(&v) {
                            for _ in 0..e {
                                alist.push(v - a_start);
                            }
                        } else if b_vars.contains(&v) {
                            for _ in 0..e {
                                blist.push(v - b_start);
                            }
                        } else {
                            rest.push((table[v as usize].expect("mapped variable"), e));
                        }
                    }
                    debug_assert_eq!(alist.len(), blist.len());
                    let mut pairs = rest;
                    for (i, j) in alist.iter().zip(blist.iter()) {
                        pairs.push((w_start + i * q as u32 + j, 1));
                    }
                    (Monomial::from_pairs(&pairs), c.clone())
                })
                .collect();
            out.push(Polynomial::from_terms(new_ring.clone(), terms));
        }
        Ok(out)
    };

    let mut polys = Vec::new();
    for f in &state.polys {
        polys.extend(map_poly(f)?);
    }
    let mut gamma = Vec::new();
    for g in &state.gamma {
        gamma.extend(map_poly(g)?);
    }
    // Rank-one relations cutting out the Segre image.
    let w = |i: usize, j: usize| {
        Polynomial::var(new_ring.clone(), w_start + (i * q + j) as u32)
    };
    for i in 0..p {
        for k in i + 1..p {
            for j in 0..q {
                for l in j + 1..q {
                    gamma.push(w(i, j).mul(&w(k, l)).sub(&w(i, l).mul(&w(k, j))));
                }
            }
        }
    }
    Ok(MergeState { blocks: new_blocks, ring: new_ring, polys, gamma })
}

/// The conjunction of two formulas over the same pair, merged down to a
/// single witness block.  The operands must not share free-variable names;
/// to identify variables, rename them to a common name first is not
/// supported — instead conjoin and then identify by substitution.
pub fn tame_conjoin(phi: &TameFormula, psi: &TameFormula) -> Result<TameFormula> {
    if phi.ctx != psi.ctx {
        return Err(Error::RingMismatch("formulas over different pair contexts".into()));
    }
    if let Some(shared) = phi.x_names.iter().find(|n| psi.x_names.contains(n)) {
        return Err(Error::VariableClash(format!(
            "free variable {shared} appears in both conjuncts"
        )));
    }
    let mut x_names = phi.x_names.clone();
    x_names.extend(psi.x_names.iter().cloned());

    let mut taken: BTreeSet<String> = phi.ctx.e_names().into_iter().collect();
    taken.extend(phi.ctx.t_names());
    taken.extend(x_names.iter().cloned());
    let arities: Vec<usize> = phi
        .blocks
        .iter()
        .chain(psi.blocks.iter())
        .map(|z| z.arity)
        .collect();
    let names = fresh_block_names(&mut taken, &arities);
    let blocks: Vec<ZetaBlock> = phi
        .blocks
        .iter()
        .chain(psi.blocks.iter())
        .zip(names.iter())
        .map(|(z, n)| ZetaBlock { name: n.clone(), arity: z.arity, projective: z.projective })
        .collect();
    let ring = formula_ring(&phi.ctx, &x_names, &blocks)?;

    // Move both operand's polynomials into the combined ring.
    let move_from = |src: &TameFormula, block_offset: usize| -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
        let mut table: Vec<u32> = Vec::with_capacity(src.ring.num_vars());
        for v in 0..src.ring.num_vars() as u32 {
            let name = src.ring.var_name(v);
            if let Some(idx) = ring.var_index(name) {
                // e, t and free variables keep their names.
                if src.ring.block_of_var(v) < 3 {
                    table.push(idx);
                    continue;
                }
            }
            let block = src.ring.block_of_var(v) - 3;
            let src_vars = src.zeta_vars(block);
            let pos = src_vars.iter().position(|&w| w == v).expect("var in own block");
            let new_block = &blocks[block_offset + block];
            let bi = ring.block_index(&new_block.name).expect("block exists");
            table.push(ring.block_vars(bi)[pos]);
        }
        let polys = src.polys.iter().map(|f| remap_with(f, &ring, &table)).collect();
        let gamma = src.gamma.iter().map(|g| remap_with(g, &ring, &table)).collect();
        Ok((polys, gamma))
    };
    let (mut polys, mut gamma) = move_from(phi, 0)?;
    let (p2, g2) = move_from(psi, phi.blocks.len())?;
    polys.extend(p2);
    gamma.extend(g2);

    let mut state = MergeState { blocks, ring, polys, gamma };
    while state.blocks.len() > 1 {
        state = segre_step(&phi.ctx, &x_names, state, &mut taken)?;
    }
    TameFormula::new(phi.ctx.clone(), x_names, state.blocks, state.polys, state.gamma)
}

// ---------------------------------------------------------------------------
// Zariski reduction on the small field
// ---------------------------------------------------------------------------

/// For a formula whose coefficients do not involve t-variables, computes the
/// vanishing ideal of its solution set on e-tuples: saturate the equations
/// by every nonzero witness block, then eliminate the witness variables.
/// The result lives in `Q[e.., x..]`; the zero ideal means the formula holds
/// on all of the small field.
pub fn tame_to_zariski_on_e(phi: &TameFormula) -> Result<Ideal> {
    let tvars = phi.t_indices();
    for p in phi.polys.iter().chain(phi.gamma.iter()) {
        if p.deg_over(&tvars).unwrap_or(0) > 0 {
            return Err(Error::ShapeMismatch(
                "t-variable parameters block the reduction to the small field".into(),
            ));
        }
    }
    let mut gens = phi.polys.clone();
    gens.extend(phi.gamma.iter().cloned());
    let mut ideal = Ideal::new(phi.ring.clone(), gens)?;
    for (i, z) in phi.blocks.iter().enumerate() {
        if z.projective && !ideal.is_unit_ideal() {
            ideal = saturate_vars(&ideal, &phi.zeta_vars(i))?;
        }
    }
    let mut zeta_all = Vec::new();
    for i in 0..phi.blocks.len() {
        zeta_all.extend(phi.zeta_vars(i));
    }
    let elim = ideal.eliminate(&zeta_all);
    let e_names = phi.ctx.e_names();
    let out_ring = make_ring(
        FieldKind::Rationals,
        &[("e", &e_names), ("x", &phi.x_names)],
    )?;
    let gens = elim
        .gens()
        .iter()
        .map(|g| g.remap_by_name(&out_ring))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(out_ring, gens)
}

/// Membership of an e-tuple in the variety cut out by a reduction result
/// (an ideal over `Q[e.., x..]`).
pub fn zariski_membership(
    system: &Ideal,
    ctx: &PairContext,
    b: &[PairElement],
) -> Result<bool> {
    let ring = system.ring();
    let xb = ring
        .block_index("x")
        .ok_or_else(|| Error::RingMismatch("system has no x block".into()))?;
    let x_vars = ring.block_vars(xb);
    if x_vars.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "system has {} x-variables, got {} values",
            x_vars.len(),
            b.len()
        )));
    }
    let x_names: Vec<String> =
        x_vars.iter().map(|&v| ring.var_name(v).to_string()).collect();
    let e_names = ctx.e_names();
    let t_names = ctx.t_names();
    let scratch = make_ring(
        FieldKind::Rationals,
        &[("e", &e_names), ("t", &t_names), ("x", &x_names)],
    )?;
    for g in system.basis().elems() {
        let mut cur = g.remap_by_name(&scratch)?;
        for (i, bi) in b.iter().enumerate() {
            let v = scratch
                .var_index(&x_names[i])
                .expect("x variable present in scratch ring");
            let num = bi.num().remap_by_name(&scratch)?;
            let den = bi.den().remap_by_name(&scratch)?;
            cur = substitute_cleared(&cur, v, &num, &den);
        }
        if !cur.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Vanishing ideals and ranks
// ---------------------------------------------------------------------------

struct AffineData {
    x_ring: Arc<Ring>,      // Q(e)[x1..xn]
    x_names: Vec<String>,
    basis: Vec<Polynomial>, // reduced basis of the vanishing ideal of `a`
}

/// The vanishing ideal of the tuple `a` over the e-function field: graph
/// ideal of the presentation, saturated by the denominators, with the
/// t-variables eliminated.
fn affine_vanishing(ctx: &PairContext, a: &[PairElement]) -> Result<AffineData> {
    if a.is_empty() {
        return Err(Error::ShapeMismatch("empty tuple has no vanishing ideal".into()));
    }
    for ai in a {
        if !ai.num().ring().same_frame(ctx.ring()) {
            return Err(Error::RingMismatch(
                "tuple entry comes from a different pair context".into(),
            ));
        }
    }
    let n = a.len();
    let s = ctx.t_count;
    let x_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let t_names = ctx.t_names();
    let w_ring =
        make_ring(ctx.e_fractions(), &[("t", &t_names), ("x", &x_names)])?;
    let m = ctx.e_count as u32;
    let tmap = |v: u32| v - m;
    let mut gens = Vec::new();
    let mut den_factors: Vec<Polynomial> = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let num_w = lift_e_coeffs(ai.num(), &ctx.e_ring, &w_ring, &tmap);
        let den_w = lift_e_coeffs(ai.den(), &ctx.e_ring, &w_ring, &tmap);
        let xv = Polynomial::var(w_ring.clone(), (s + i) as u32);
        gens.push(den_w.mul(&xv).sub(&num_w));
        if !den_w.is_one() && !den_factors.contains(&den_w) {
            den_factors.push(den_w);
        }
    }
    let mut ideal = Ideal::new(w_ring.clone(), gens)?;
    if !den_factors.is_empty() {
        let mut prod = Polynomial::one(w_ring.clone());
        for d in &den_factors {
            prod = prod.mul(d);
        }
        ideal = ideal.saturate_poly(&prod)?;
    }
    let elim = ideal.eliminate_block("t")?;
    let x_ring = make_ring(ctx.e_fractions(), &[("x", &x_names)])?;
    let gens = elim
        .gens()
        .iter()
        .map(|g| g.remap_by_name(&x_ring))
        .collect::<Result<Vec<_>>>()?;
    let basis = Ideal::new(x_ring.clone(), gens)?.basis().elems().to_vec();
    Ok(AffineData { x_ring, x_names, basis })
}

/// Transcendence degree of a family of e-function-field scalars over the
/// base named by `named`, via the rank of the Jacobian in the e-variables.
fn e_transcendence_over_base(
    ctx: &PairContext,
    funcs: &[Scalar],
    named: &[usize],
) -> Result<usize> {
    let m = ctx.e_count;
    let fe = ctx.e_fractions();
    let mut rows = Vec::new();
    for &j in named {
        let mut row = vec![fe.zero(); m];
        row[j] = fe.one();
        rows.push(row);
    }
    for f in funcs {
        let (num, den) = match f {
            Scalar::Fn(r) => (r.num.clone(), r.den.clone()),
            Scalar::Rat(q) => (
                Polynomial::constant(ctx.e_ring.clone(), Scalar::Rat(q.clone())),
                Polynomial::one(ctx.e_ring.clone()),
            ),
            Scalar::Mod { .. } => {
                return Err(Error::FieldMismatch(
                    "expected characteristic-0 scalars".into(),
                ))
            }
        };
        let den2 = den.mul(&den);
        let row: Vec<Scalar> = (0..m as u32)
            .map(|v| {
                let d = num.derivative(v).mul(&den).sub(&num.mul(&den.derivative(v)));
                if d.is_zero() {
                    fe.zero()
                } else {
                    Scalar::from_fraction(d, den2.clone())
                }
            })
            .collect();
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(0);
    }
    let rank = Matrix::from_rows(fe, rows)?.rank();
    Ok(rank - named.len())
}

/// The base a transcendence degree is measured over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranscendenceBase {
    /// Over the whole small field (degrees in the t-variables).
    OverE,
    /// Over the e-part of the given base field; the elements must lie in
    /// the e-part themselves.
    OverLambda(BaseField),
}

/// Transcendence degree of a tuple, by the Jacobian criterion
/// (characteristic 0).
pub fn transcendence_degree(
    ctx: &PairContext,
    elems: &[PairElement],
    base: &TranscendenceBase,
) -> Result<usize> {
    match base {
        TranscendenceBase::OverE => {
            if elems.is_empty() {
                return Ok(0);
            }
            let ff = FieldKind::Fractions(ctx.ring.clone());
            let tvars = ctx.t_indices();
            let mut rows = Vec::new();
            for el in elems {
                let num = el.num();
                let den = el.den();
                let den2 = den.mul(den);
                let row: Vec<Scalar> = tvars
                    .iter()
                    .map(|&v| {
                        let d =
                            num.derivative(v).mul(den).sub(&num.mul(&den.derivative(v)));
                        if d.is_zero() {
                            ff.zero()
                        } else {
                            Scalar::from_fraction(d, den2.clone())
                        }
                    })
                    .collect();
                rows.push(row);
            }
            Ok(Matrix::from_rows(ff, rows)?.rank())
        }
        TranscendenceBase::OverLambda(k) => {
            k.validate(ctx)?;
            let scalars = elems
                .iter()
                .map(|el| el.e_scalar(ctx))
                .collect::<Result<Vec<_>>>()?;
            e_transcendence_over_base(ctx, &scalars, k.named_indices())
        }
    }
}

/// Generators of the λ-coefficient field of a tuple over a base, up to
/// interalgebraicity: the non-base coefficients of the reduced basis of the
/// vanishing ideal, with their transcendence degree over the base.
pub struct LambdaField {
    pub generators: Vec<PairElement>,
    pub trdeg: usize,
}

pub fn lambda_field_generators(
    ctx: &PairContext,
    a: &[PairElement],
    k: &BaseField,
) -> Result<LambdaField> {
    k.validate(ctx)?;
    let data = affine_vanishing(ctx, a)?;
    let named = k.named_indices();
    let mut vals: Vec<Scalar> = Vec::new();
    for g in &data.basis {
        for (_, c) in g.terms() {
            if scalar_in_base(c, named) {
                continue;
            }
            // Normalize to a monic numerator so generator lists are stable.
            let lc = match c {
                Scalar::Fn(f) => f.num.leading_coeff().cloned(),
                _ => None,
            };
            let norm = match lc {
                Some(l) if !l.is_one() => c.mul(&l.inv()?),
                _ => c.clone(),
            };
            if !vals.contains(&norm) {
                vals.push(norm);
            }
        }
    }
    let trdeg = e_transcendence_over_base(ctx, &vals, named)?;
    let generators =
        vals.iter().map(|s| ctx.from_e_scalar(s)).collect::<Result<Vec<_>>>()?;
    Ok(LambdaField { generators, trdeg })
}

/// An ordinal below ω², written ω·m + r; ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrdinalRank {
    pub omegas: u32,
    pub finite: u32,
}

impl OrdinalRank {
    pub fn new(omegas: u32, finite: u32) -> OrdinalRank {
        OrdinalRank { omegas, finite }
    }
}

impl fmt::Display for OrdinalRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omegas, self.finite) {
            (0, r) => write!(f, "{r}"),
            (1, 0) => write!(f, "w"),
            (1, r) => write!(f, "w+{r}"),
            (m, 0) => write!(f, "w*{m}"),
            (m, r) => write!(f, "w*{m}+{r}"),
        }
    }
}

/// The rank of a tuple over a base: ω times the transcendence degree over
/// the small field, plus the transcendence degree of the λ-coefficient
/// field of the tuple over the base's e-part.
pub fn rm_rank(ctx: &PairContext, a: &[PairElement], k: &BaseField) -> Result<OrdinalRank> {
    let m = transcendence_degree(ctx, a, &TranscendenceBase::OverE)?;
    let r = lambda_field_generators(ctx, a, k)?.trdeg;
    Ok(OrdinalRank::new(m as u32, r as u32))
}

// ---------------------------------------------------------------------------
// Homogeneous loci of coefficient tuples
// ---------------------------------------------------------------------------

struct LocusBlock {
    /// Chart variable of the block in the target ring (the coordinate
    /// normalized to 1 at the defining point).
    chart: u32,
    /// The remaining block variables in the target ring, with their names.
    others: Vec<(u32, String)>,
    /// The affine coordinates of the defining point (e-function scalars),
    /// aligned with `others`.
    values: Vec<Scalar>,
}

/// The vanishing ideal of a tuple of points over the base named by `named`,
/// homogenized per block with respect to its chart variable and moved into
/// the target formula ring.
fn multi_homogeneous_locus(
    ctx: &PairContext,
    named: &[usize],
    blocks: &[LocusBlock],
    target: &Arc<Ring>,
) -> Result<Vec<Polynomial>> {
    let flat: Vec<(&LocusBlock, usize)> = blocks
        .iter()
        .flat_map(|b| (0..b.others.len()).map(move |j| (b, j)))
        .collect();
    if flat.is_empty() {
        return Ok(Vec::new());
    }
    let e_names = ctx.e_names();
    let z_names: Vec<String> = flat.iter().map(|(b, j)| b.others[*j].1.clone()).collect();
    let w_ring = make_ring(FieldKind::Rationals, &[("e", &e_names), ("Z", &z_names)])?;
    let m = ctx.e_count;
    let mut gens = Vec::new();
    let mut den_factors: Vec<Polynomial> = Vec::new();
    for (idx, (b, j)) in flat.iter().enumerate() {
        let (num, den) = match &b.values[*j] {
            Scalar::Fn(f) => (
                f.num.remap_by_name(&w_ring)?,
                f.den.remap_by_name(&w_ring)?,
            ),
            Scalar::Rat(q) => (
                Polynomial::constant(w_ring.clone(), Scalar::Rat(q.clone())),
                Polynomial::one(w_ring.clone()),
            ),
            Scalar::Mod { .. } => {
                return Err(Error::FieldMismatch(
                    "expected characteristic-0 scalars".into(),
                ))
            }
        };
        let zv = Polynomial::var(w_ring.clone(), (m + idx) as u32);
        gens.push(den.mul(&zv).sub(&num));
        if !den.is_one() && !den_factors.contains(&den) {
            den_factors.push(den);
        }
    }
    let mut ideal = Ideal::new(w_ring.clone(), gens)?;
    if !den_factors.is_empty() {
        let mut prod = Polynomial::one(w_ring.clone());
        for d in &den_factors {
            prod = prod.mul(d);
        }
        ideal = ideal.saturate_poly(&prod)?;
    }
    let unnamed: Vec<u32> = (0..m as u32)
        .filter(|v| !named.contains(&(*v as usize)))
        .collect();
    let elim = ideal.eliminate(&unnamed);
    // Canonical reduced basis over the named part only.
    let named_names: Vec<String> = named
        .iter()
        .map(|&i| ctx.ring.var_name(i as u32).to_string())
        .collect();
    let v_ring =
        make_ring(FieldKind::Rationals, &[("e", &named_names), ("Z", &z_names)])?;
    let gens = elim
        .gens()
        .iter()
        .map(|g| g.remap_by_name(&v_ring))
        .collect::<Result<Vec<_>>>()?;
    let basis = Ideal::new(v_ring, gens)?.basis().elems().to_vec();
    // Homogenize per block against its chart variable, in the target ring.
    let mut out = Vec::new();
    for g in &basis {
        let mut cur = g.remap_by_name(target)?;
        for b in blocks {
            let vars: Vec<u32> = b.others.iter().map(|(v, _)| *v).collect();
            cur = cur.homogenize(b.chart, &vars);
        }
        if !cur.is_zero() {
            out.push(cur);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The θ emitter
// ---------------------------------------------------------------------------

/// A witness formula together with a nonvanishing side condition σ(ζ) ≠ 0.
#[derive(Debug, Clone)]
pub struct ThetaFormula {
    formula: TameFormula,
    sigma: Polynomial,
}

impl ThetaFormula {
    pub fn formula(&self) -> &TameFormula {
        &self.formula
    }

    pub fn sigma(&self) -> &Polynomial {
        &self.sigma
    }
}

impl fmt::Display for ThetaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula)?;
        writeln!(f, "nonzero: {}", self.sigma)?;
        Ok(())
    }
}

/// Emits the dominating formula of a tuple over a base: the reduced basis
/// of its vanishing ideal with every non-base coefficient replaced by a
/// witness coordinate (linear in the witness block), σ = product of the
/// leading coefficients, γ = the locus of the replaced coefficient tuple
/// over the base.  The tuple itself satisfies the output with the witness
/// (1, actual coefficients).
pub fn emit_theta(
    ctx: &PairContext,
    a: &[PairElement],
    k: &BaseField,
) -> Result<ThetaFormula> {
    k.validate(ctx)?;
    let data = affine_vanishing(ctx, a)?;
    if data.basis.is_empty() {
        let formula = TameFormula::tautology(ctx.clone(), data.x_names)?;
        let sigma = Polynomial::one(formula.ring().clone());
        return Ok(ThetaFormula { formula, sigma });
    }
    let named = k.named_indices();
    let mut vals: Vec<Scalar> = Vec::new();
    for g in &data.basis {
        for (_, c) in g.terms() {
            if !scalar_in_base(c, named) && !vals.contains(c) {
                vals.push(c.clone());
            }
        }
    }
    let r = vals.len();
    let block = ZetaBlock::projective("z", r + 1);
    let ring = formula_ring(ctx, &data.x_names, &[block.clone()])?;
    let zbase = (ctx.e_count + ctx.t_count + data.x_names.len()) as u32;
    let zvar = |j: usize| Polynomial::var(ring.clone(), zbase + j as u32);
    let xbase = (ctx.e_count + ctx.t_count) as u32;

    let mut polys = Vec::new();
    let mut sigma = Polynomial::one(ring.clone());
    for g in &data.basis {
        // Common denominator of the base coefficients of this generator.
        let mut dg = Polynomial::one(ctx.e_ring.clone());
        let mut seen: Vec<Polynomial> = Vec::new();
        for (_, c) in g.terms() {
            if scalar_in_base(c, named) {
                if let Scalar::Fn(f) = c {
                    if !f.den.is_one() && !seen.contains(&f.den) {
                        seen.push(f.den.clone());
                        dg = dg.mul(&f.den);
                    }
                }
            }
        }
        let dg_f = dg.remap_by_name(&ring)?;
        let mut ri = Polynomial::zero(ring.clone());
        for (mono, c) in g.terms() {
            let xmono = mono.remap(&|v| xbase + v);
            let xpoly = Polynomial::monomial(ring.clone(), xmono, Scalar::from_int(1));
            let term = if scalar_in_base(c, named) {
                let cpoly = scalar_times_poly(c, &dg)?.remap_by_name(&ring)?;
                cpoly.mul(&xpoly).mul(&zvar(0))
            } else {
                let j = vals.iter().position(|v| v == c).expect("value recorded");
                dg_f.mul(&xpoly).mul(&zvar(j + 1))
            };
            ri = ri.add(&term);
        }
        polys.push(ri);
        sigma = sigma.mul(&dg_f).mul(&zvar(0));
    }
    let others: Vec<(u32, String)> = (1..=r)
        .map(|j| {
            let v = zbase + j as u32;
            (v, ring.var_name(v).to_string())
        })
        .collect();
    let gamma = multi_homogeneous_locus(
        ctx,
        named,
        &[LocusBlock { chart: zbase, others, values: vals }],
        &ring,
    )?;
    let formula =
        TameFormula::new(ctx.clone(), data.x_names, vec![block], polys, gamma)?;
    Ok(ThetaFormula { formula, sigma })
}

/// Evaluates a θ-formula: like [`tame_eval`] with the additional constraint
/// that σ does not vanish (the witness system is saturated by σ).
pub fn theta_eval(theta: &ThetaFormula, b: &[PairElement]) -> Result<bool> {
    match witness_system(&theta.formula, b)? {
        WitnessSystem::Decided(v) => Ok(v),
        WitnessSystem::System { ring, polys, blocks, zeta_base } => {
            let shift = |v: u32| v - zeta_base;
            let sigma =
                lift_e_coeffs(&theta.sigma, &theta.formula.ctx.e_ring, &ring, &shift);
            solve_witness_system(ring, polys, &blocks, Some(&sigma))
        }
    }
}

// ---------------------------------------------------------------------------
// The χ emitter
// ---------------------------------------------------------------------------

/// Emits the rank-isolating formula of a tuple over a base: one witness
/// block per generator (the reduced basis of the vanishing ideal plus a
/// dependence relation for every subtuple one longer than the transcendence
/// degree), each generator rewritten with one witness coordinate per term,
/// and γ = the multi-homogeneous locus of the coefficient tuples.  Every
/// realization has rank at most the rank of `a`.
pub fn emit_chi(
    ctx: &PairContext,
    a: &[PairElement],
    k: &BaseField,
) -> Result<TameFormula> {
    k.validate(ctx)?;
    let data = affine_vanishing(ctx, a)?;
    let named = k.named_indices();
    let n = a.len();
    let m_tr = transcendence_degree(ctx, a, &TranscendenceBase::OverE)?;
    let mut gens: Vec<Polynomial> = data.basis.clone();
    if m_tr + 1 <= n {
        let ideal = Ideal::new(data.x_ring.clone(), data.basis.clone())?;
        for sub in index_subsets((m_tr + 1) as u32, n as u32) {
            let drop: Vec<u32> =
                (0..n as u32).filter(|v| !sub.contains(v)).collect();
            let elim = ideal.eliminate(&drop);
            let canon = Ideal::new(data.x_ring.clone(), elim.gens().to_vec())?;
            let first = canon.basis().elems().first().cloned().ok_or_else(|| {
                Error::Invalid(
                    "dependent subtuple has a trivial vanishing ideal".into(),
                )
            })?;
            if !gens.contains(&first) {
                gens.push(first);
            }
        }
    }
    if gens.is_empty() {
        return TameFormula::tautology(ctx.clone(), data.x_names);
    }
    let blocks: Vec<ZetaBlock> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| ZetaBlock::projective(&format!("c{}", i + 1), g.num_terms()))
        .collect();
    let ring = formula_ring(ctx, &data.x_names, &blocks)?;
    let xbase = (ctx.e_count + ctx.t_count) as u32;
    let mut polys = Vec::new();
    let mut locus_blocks = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let bi = ring.block_index(&blocks[i].name).expect("block exists");
        let bvars = ring.block_vars(bi);
        let mut ri = Polynomial::zero(ring.clone());
        let mut values = Vec::new();
        for (j, (mono, c)) in g.terms().iter().enumerate() {
            let xmono = mono.remap(&|v| xbase + v);
            ri = ri.add(&Polynomial::monomial(
                ring.clone(),
                xmono.mul(&Monomial::var(bvars[j])),
                Scalar::from_int(1),
            ));
            if j > 0 {
                values.push(c.clone());
            }
        }
        polys.push(ri);
        let others: Vec<(u32, String)> = bvars[1..]
            .iter()
            .map(|&v| (v, ring.var_name(v).to_string()))
            .collect();
        locus_blocks.push(LocusBlock { chart: bvars[0], others, values });
    }
    let gamma = multi_homogeneous_locus(ctx, named, &locus_blocks, &ring)?;
    TameFormula::new(ctx.clone(), data.x_names, blocks, polys, gamma)
}

// ---------------------------------------------------------------------------
// The minimal emitter
// ---------------------------------------------------------------------------

/// Decomposition of a family of e-function scalars over the base: a maximal
/// base-linearly-independent subfamily and the coordinates of every member
/// with respect to it.
struct BaseDecomposition {
    basis: Vec<Scalar>,       // independent values, in order of first occurrence
    coords: Vec<Vec<Scalar>>, // per value: base-field coordinates over `basis`
}

fn base_decompose(
    ctx: &PairContext,
    vals: &[Scalar],
    named: &[usize],
) -> Result<BaseDecomposition> {
    // Common denominator over the full e-ring.
    let mut den_factors: Vec<Polynomial> = Vec::new();
    for v in vals {
        if let Scalar::Fn(f) = v {
            if !f.den.is_one() && !den_factors.contains(&f.den) {
                den_factors.push(f.den.clone());
            }
        }
    }
    let mut common = Polynomial::one(ctx.e_ring.clone());
    for d in &den_factors {
        common = common.mul(d);
    }
    let nums: Vec<Polynomial> = vals
        .iter()
        .map(|v| scalar_times_poly(v, &common))
        .collect::<Result<Vec<_>>>()?;

    // Vector representation over the base field.
    let named_names: Vec<String> = named
        .iter()
        .map(|&i| ctx.ring.var_name(i as u32).to_string())
        .collect();
    let (base_field, named_ring) = if named.is_empty() {
        (FieldKind::Rationals, None)
    } else {
        let r = make_ring(FieldKind::Rationals, &[("e", &named_names)])?;
        (FieldKind::Fractions(r.clone()), Some(r))
    };
    let unnamed: Vec<u32> = (0..ctx.e_count as u32)
        .filter(|v| !named.contains(&(*v as usize)))
        .collect();
    let components = |p: &Polynomial| -> Result<BTreeMap<Vec<(u32, u32)>, Scalar>> {
        let mut out = BTreeMap::new();
        match &named_ring {
            None => {
                for (mono, c) in p.terms() {
                    out.insert(mono.pairs().to_vec(), c.clone());
                }
            }
            Some(nr) => {
                for (mono, cof) in p.collect_by(&unnamed) {
                    let np = cof.remap_by_name(nr)?;
                    out.insert(
                        mono.pairs().to_vec(),
                        Scalar::from_fraction(np, Polynomial::one(nr.clone())),
                    );
                }
            }
        }
        Ok(out)
    };
    let comps: Vec<BTreeMap<Vec<(u32, u32)>, Scalar>> =
        nums.iter().map(|p| components(p)).collect::<Result<Vec<_>>>()?;
    let mut keys: BTreeSet<Vec<(u32, u32)>> = BTreeSet::new();
    for c in &comps {
        keys.extend(c.keys().cloned());
    }
    let keys: Vec<Vec<(u32, u32)>> = keys.into_iter().collect();
    let vector = |c: &BTreeMap<Vec<(u32, u32)>, Scalar>| -> Vec<Scalar> {
        keys.iter()
            .map(|k| c.get(k).cloned().unwrap_or_else(|| base_field.zero()))
            .collect()
    };
    // Greedy selection of an independent subfamily.
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_vecs: Vec<Vec<Scalar>> = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let v = vector(c);
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut rows = chosen_vecs.clone();
        rows.push(v.clone());
        if Matrix::from_rows(base_field.clone(), rows)?.rank() == chosen_vecs.len() + 1 {
            chosen.push(i);
            chosen_vecs.push(v);
        }
    }
    // Coordinates of every value over the chosen subfamily.
    let cols = if keys.is_empty() { 0 } else { keys.len() };
    let mut mat_rows = vec![vec![base_field.zero(); chosen.len()]; cols];
    for (j, vec_j) in chosen_vecs.iter().enumerate() {
        for (r, entry) in vec_j.iter().enumerate() {
            mat_rows[r][j] = entry.clone();
        }
    }
    let mat = Matrix::from_rows(base_field.clone(), mat_rows)?;
    let mut coords = Vec::new();
    for c in &comps {
        let v = vector(c);
        if v.iter().all(Scalar::is_zero) {
            coords.push(vec![base_field.zero(); chosen.len()]);
            continue;
        }
        let sol = mat.solve(&v)?.ok_or_else(|| {
            Error::Invalid("value outside the span of the chosen subfamily".into())
        })?;
        coords.push(sol);
    }
    let basis = chosen.iter().map(|&i| vals[i].clone()).collect();
    Ok(BaseDecomposition { basis, coords })
}

/// Clears the denominators of the coordinate lists by one global factor and
/// returns, per list, the linear form Σ coords[j]·Δ·z_j in the formula ring.
fn cleared_linear_forms(
    ctx: &PairContext,
    coords: &[Vec<Scalar>],
    named: &[usize],
    ring: &Arc<Ring>,
    zbase: u32,
) -> Result<Vec<Polynomial>> {
    let forms = if named.is_empty() {
        // Rational coordinates: clear by the lcm of all denominators.
        let mut delta = BigInt::one();
        for row in coords {
            for c in row {
                if let Scalar::Rat(q) = c {
                    delta = delta.lcm(q.denom());
                }
            }
        }
        let delta = Scalar::Rat(num_rational::BigRational::from_integer(delta));
        coords
            .iter()
            .map(|row| {
                let mut form = Polynomial::zero(ring.clone());
                for (j, c) in row.iter().enumerate() {
                    let coeff = c.mul(&delta);
                    if coeff.is_zero() {
                        continue;
                    }
                    form = form.add(&Polynomial::monomial(
                        ring.clone(),
                        Monomial::var(zbase + j as u32),
                        coeff,
                    ));
                }
                form
            })
            .collect::<Vec<_>>()
    } else {
        // Coordinates over Q(named e's): clear by the product of the
        // distinct denominators.
        let mut den_factors: Vec<Polynomial> = Vec::new();
        for row in coords {
            for c in row {
                if let Scalar::Fn(f) = c {
                    if !f.den.is_one() && !den_factors.contains(&f.den) {
                        den_factors.push(f.den.clone());
                    }
                }
            }
        }
        let nr = match coords
            .iter()
            .flat_map(|row| row.iter())
            .find_map(|c| match c {
                Scalar::Fn(f) => Some(f.num.ring().clone()),
                _ => None,
            }) {
            Some(r) => r,
            None => {
                let named_names: Vec<String> = named
                    .iter()
                    .map(|&i| ctx.ring.var_name(i as u32).to_string())
                    .collect();
                make_ring(FieldKind::Rationals, &[("e", &named_names)])?
            }
        };
        let mut delta = Polynomial::one(nr);
        for d in &den_factors {
            delta = delta.mul(d);
        }
        let mut out = Vec::new();
        for row in coords {
            let mut form = Polynomial::zero(ring.clone());
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let coeff = scalar_times_poly(c, &delta)?.remap_by_name(ring)?;
                form = form.add(
                    &coeff.mul(&Polynomial::var(ring.clone(), zbase + j as u32)),
                );
            }
            out.push(form);
        }
        out
    };
    Ok(forms)
}

/// Emits the minimal witness formula of a tuple over a base, through the
/// parameter scheme of its projective closure: homogenize the vanishing
/// ideal of `(1, a)`, read off its parameter-scheme point, express the
/// point's coordinates over a base-linear basis as linear forms η(ζ), and
/// assemble the degree-slice conditions S(1, x, η(ζ)) together with the
/// scheme equations and the locus of the basis values.
pub fn emit_minimal_tame(
    ctx: &PairContext,
    a: &[PairElement],
    k: &BaseField,
) -> Result<TameFormula> {
    k.validate(ctx)?;
    let data = affine_vanishing(ctx, a)?;
    let n = a.len();
    // Projective closure of the graph point (1 : a1 : ... : an).
    let proj_names: Vec<String> = (0..=n).map(|i| format!("X{i}")).collect();
    let proj_ring = make_ring(ctx.e_fractions(), &[("X", &proj_names)])?;
    let rest_vars: Vec<u32> = (1..=n as u32).collect();
    let table: Vec<u32> = (0..n as u32).map(|v| v + 1).collect();
    let gens_h: Vec<Polynomial> = data
        .basis
        .iter()
        .map(|g| remap_with(g, &proj_ring, &table).homogenize(0, &rest_vars))
        .collect();
    let ih = Ideal::new(proj_ring, gens_h)?;
    let q = hilbert_polynomial(&ih)?;
    let scheme = hilbert_scheme_data(n as u32, &q)?;
    if scheme.n0() == 0 {
        return TameFormula::tautology(ctx.clone(), data.x_names);
    }
    let pt = point_from_ideal(&ih, &scheme)?;
    let kappa: Vec<Scalar> = scheme
        .eta_subsets()
        .iter()
        .map(|t| pt.plucker().multivector().coord(t))
        .collect();
    let named = k.named_indices();
    let dec = base_decompose(ctx, &kappa, named)?;
    debug_assert!(dec.basis.first().map(Scalar::is_one).unwrap_or(false));
    let r = dec.basis.len() - 1;

    let block = ZetaBlock::projective("z", r + 1);
    let ring = formula_ring(ctx, &data.x_names, &[block.clone()])?;
    let xbase = (ctx.e_count + ctx.t_count) as u32;
    let zbase = xbase + n as u32;
    let forms = cleared_linear_forms(ctx, &dec.coords, named, &ring, zbase)?;

    // Degree-slice conditions: compose the templates with X0 ↦ 1,
    // Xi ↦ xi and each coefficient variable ↦ its linear form.
    let template_map = |v: u32| -> Polynomial {
        if v == 0 {
            Polynomial::one(ring.clone())
        } else if v <= n as u32 {
            Polynomial::var(ring.clone(), xbase + v - 1)
        } else {
            forms[(v - n as u32 - 1) as usize].clone()
        }
    };
    let mut polys = Vec::new();
    for st in scheme.s_template() {
        let composed = substitute_all(st, &ring, &template_map);
        if !composed.is_zero() {
            polys.push(composed);
        }
    }

    let mut gamma = Vec::new();
    // Decomposability relations of the parameter point.
    for rel in scheme.grassmann_relations() {
        let composed = substitute_all(rel, &ring, &|v| forms[v as usize].clone());
        if !composed.is_zero() {
            gamma.push(composed);
        }
    }
    // Rank conditions of the parameter scheme beyond the base degree.
    for rc in scheme.rank_window() {
        let composed_rows: Vec<Vec<Polynomial>> = rc
            .rows
            .iter()
            .map(|row| {
                row.iter().map(|e| substitute_all(e, &ring, &template_map)).collect()
            })
            .collect();
        let nrows = composed_rows.len();
        let ncols = composed_rows.first().map(|r| r.len()).unwrap_or(0);
        let size = rc.bound + 1;
        if size > nrows || size > ncols {
            continue;
        }
        let row_sets = index_subsets(size as u32, nrows as u32);
        let col_sets = index_subsets(size as u32, ncols as u32);
        if row_sets.len().saturating_mul(col_sets.len()) > MINOR_CAP {
            return Err(Error::Invalid(format!(
                "rank condition at degree {} needs more than {MINOR_CAP} minors",
                rc.degree
            )));
        }
        for rs in &row_sets {
            let ridx: Vec<usize> = rs.iter().map(|&v| v as usize).collect();
            for cs in &col_sets {
                let cidx: Vec<usize> = cs.iter().map(|&v| v as usize).collect();
                let minor = poly_det(&composed_rows, &ridx, &cidx, &ring);
                if !minor.is_zero() {
                    gamma.push(minor);
                }
            }
        }
    }
    // Locus of the independent coefficient values over the base.
    let others: Vec<(u32, String)> = (1..=r)
        .map(|j| {
            let v = zbase + j as u32;
            (v, ring.var_name(v).to_string())
        })
        .collect();
    gamma.extend(multi_homogeneous_locus(
        ctx,
        named,
        &[LocusBlock { chart: zbase, others, values: dec.basis[1..].to_vec() }],
        &ring,
    )?);
    TameFormula::new(ctx.clone(), data.x_names, vec![block], polys, gamma)
}

// ---------------------------------------------------------------------------
// Parameter rewrites
// ---------------------------------------------------------------------------

/// Replaces the designated parameter slot (a free variable standing for the
/// λ-coefficient of `a0` over `basis`) by a fresh nonzero witness block ξ of
/// arity `basis.len() + 1`: occurrences `slot^k` become `ξ1^k ξ0^(N−k)` per
/// equation, and the linear relation `ξ0·a0 = Σ ξi·ai` is added.  With no
/// designated slot the formula is returned unchanged.
pub fn rewrite_lambda_elim(
    phi: &TameFormula,
    designated: Option<&str>,
    a0: &PairElement,
    basis: &[PairElement],
) -> Result<TameFormula> {
    let Some(slot) = designated else {
        return Ok(phi.clone());
    };
    let pos = phi
        .x_names
        .iter()
        .position(|n| n == slot)
        .ok_or_else(|| Error::ShapeMismatch(format!("no free variable {slot}")))?;
    let lv = lambda_eval(&phi.ctx, a0, basis)?;
    if lv.first().map(PairElement::is_zero).unwrap_or(true) {
        return Err(Error::ZeroLambdaValue);
    }
    let nb = basis.len();
    let mut new_x = phi.x_names.clone();
    new_x.remove(pos);
    let mut taken: BTreeSet<String> = phi.ctx.e_names().into_iter().collect();
    taken.extend(phi.ctx.t_names());
    taken.extend(new_x.iter().cloned());
    for z in &phi.blocks {
        taken.insert(z.name.clone());
        taken.extend(z.var_names());
    }
    let xi_name = fresh_block_names(&mut taken, &[nb + 1]).remove(0);
    let mut blocks = phi.blocks.clone();
    blocks.push(ZetaBlock::projective(&xi_name, nb + 1));
    let ring = formula_ring(&phi.ctx, &new_x, &blocks)?;
    let xi_vars = {
        let bi = ring.block_index(&xi_name).expect("block exists");
        ring.block_vars(bi)
    };
    let slot_var = phi.x_var(pos);
    // Old variables map by name; the slot is handled per term.
    let table: Vec<Option<u32>> = (0..phi.ring.num_vars() as u32)
        .map(|v| if v == slot_var { None } else { ring.var_index(phi.ring.var_name(v)) })
        .collect();
    let mut polys = Vec::new();
    for q in &phi.polys {
        let d = q.terms().iter().map(|(m, _)| m.exp(slot_var)).max().unwrap_or(0);
        let terms = q
            .terms()
            .iter()
            .map(|(mono, c)| {
                let k = mono.exp(slot_var);
                let mut pairs: Vec<(u32, u32)> = mono
                    .pairs()
                    .iter()
                    .filter(|&&(v, _)| v != slot_var)
                    .map(|&(v, e)| (table[v as usize].expect("mapped variable"), e))
                    .collect();
                if k > 0 {
                    pairs.push((xi_vars[1], k));
                }
                if d - k > 0 {
                    pairs.push((xi_vars[0], d - k));
                }
                (Monomial::from_pairs(&pairs), c.clone())
            })
            .collect();
        polys.push(Polynomial::from_terms(ring.clone(), terms));
    }
    // The witness relation ξ0·a0 − Σ ξi·ai = 0, cleared of denominators.
    let mut den = a0.den().clone();
    for b in basis {
        den = den.mul(b.den());
    }
    let cleared = |p: &PairElement| -> Result<Polynomial> {
        let cof = exact_div(&den, p.den()).ok_or(Error::DivisionByZero)?;
        p.num().mul(&cof).remap_by_name(&ring)
    };
    let mut relation =
        cleared(a0)?.mul(&Polynomial::var(ring.clone(), xi_vars[0]));
    for (i, bi) in basis.iter().enumerate() {
        relation = relation
            .sub(&cleared(bi)?.mul(&Polynomial::var(ring.clone(), xi_vars[i + 1])));
    }
    polys.push(relation);
    let gamma = phi
        .gamma
        .iter()
        .map(|g| g.remap_by_name(&ring))
        .collect::<Result<Vec<_>>>()?;
    TameFormula::new(phi.ctx.clone(), new_x, blocks, polys, gamma)
}

/// Elementary symmetric polynomials σ_1..σ_n of the given variables.
fn elementary_symmetric(ring: &Arc<Ring>, vars: &[u32]) -> Vec<Polynomial> {
    let n = vars.len();
    let mut e: Vec<Polynomial> = Vec::with_capacity(n + 1);
    e.push(Polynomial::one(ring.clone()));
    for _ in 0..n {
        e.push(Polynomial::zero(ring.clone()));
    }
    for &v in vars {
        let xv = Polynomial::var(ring.clone(), v);
        for k in (1..=n).rev() {
            e[k] = e[k].add(&e[k - 1].mul(&xv));
        }
    }
    e.remove(0);
    e
}

/// Replaces the designated parameter slot of a shape formula by a full
/// conjugacy class at once: the class is presented by the coefficients
/// `c0..c_{n-1}` of its monic minimal polynomial `B^n + c_{n-1}B^{n-1} + …
/// + c0` over the e-part.  The result is the instance whose equations
/// generate the product of the per-conjugate ideals, expressed through the
/// symmetric functions of the roots; it holds exactly where some conjugate
/// instance holds.
pub fn disjoin_conjugates(
    shape: &TameFormula,
    param: &str,
    class_coeffs: &[PairElement],
) -> Result<TameFormula> {
    let pos = shape
        .x_names
        .iter()
        .position(|n| n == param)
        .ok_or_else(|| {
            Error::ShapeMismatch(format!("parameter {param} is not free in the shape"))
        })?;
    let deg = class_coeffs.len();
    if deg == 0 {
        return Err(Error::ShapeMismatch("empty conjugacy class".into()));
    }
    for c in class_coeffs {
        if !c.is_e_only(&shape.ctx) {
            return Err(Error::ShapeMismatch(
                "conjugacy classes are presented over the e-part".into(),
            ));
        }
    }
    let mut new_x = shape.x_names.clone();
    new_x.remove(pos);
    let mut taken: BTreeSet<String> = shape.ctx.e_names().into_iter().collect();
    taken.extend(shape.ctx.t_names());
    taken.extend(new_x.iter().cloned());
    for z in &shape.blocks {
        taken.insert(z.name.clone());
        taken.extend(z.var_names());
    }
    let b_name = fresh_block_names(&mut taken, &[deg]).remove(0);
    let b_var_names: Vec<String> = (0..deg).map(|j| format!("{b_name}_{j}")).collect();
    // Work ring: e, t, the root variables, the surviving free variables and
    // the witness blocks.
    let e_names = shape.ctx.e_names();
    let t_names = shape.ctx.t_names();
    let mut owned: Vec<(String, Vec<String>)> = vec![
        ("e".to_string(), e_names.clone()),
        ("t".to_string(), t_names.clone()),
        (b_name.clone(), b_var_names.clone()),
        ("x".to_string(), new_x.clone()),
    ];
    for z in &shape.blocks {
        owned.push((z.name.clone(), z.var_names()));
    }
    let views: Vec<(&str, &[String])> =
        owned.iter().map(|(n, vs)| (n.as_str(), vs.as_slice())).collect();
    let work = make_ring(FieldKind::Rationals, &views)?;
    let b_vars = work.block_vars(work.block_index(&b_name).expect("block exists"));

    let slot_var = shape.x_var(pos);
    let table: Vec<Option<u32>> = (0..shape.ring.num_vars() as u32)
        .map(|v| {
            if v == slot_var {
                None
            } else {
                work.var_index(shape.ring.var_name(v))
            }
        })
        .collect();
    // One conjugate ideal per root variable, then the product ideal.
    let mut product: Option<Ideal> = None;
    for &bv in &b_vars {
        let gens: Vec<Polynomial> = shape
            .polys
            .iter()
            .map(|q| {
                let terms = q
                    .terms()
                    .iter()
                    .map(|(mono, c)| {
                        let pairs: Vec<(u32, u32)> = mono
                            .pairs()
                            .iter()
                            .map(|&(v, e)| {
                                if v == slot_var {
                                    (bv, e)
                                } else {
                                    (table[v as usize].expect("mapped variable"), e)
                                }
                            })
                            .collect();
                        (Monomial::from_pairs(&pairs), c.clone())
                    })
                    .collect();
                Polynomial::from_terms(work.clone(), terms)
            })
            .collect();
        let ideal = Ideal::new(work.clone(), gens)?;
        product = Some(match product {
            None => ideal,
            Some(p) => p.product(&ideal)?,
        });
    }
    let product = product.expect("at least one conjugate");
    // Symmetric-function relations pinning the roots to the class:
    // σ_k(B) = (−1)^k c_{deg−k}.
    let sigma = elementary_symmetric(&work, &b_vars);
    let mut rel_gens = Vec::new();
    for kk in 1..=deg {
        let c = &class_coeffs[deg - kk];
        let num = c.num().remap_by_name(&work)?;
        let den = c.den().remap_by_name(&work)?;
        let signed = if kk % 2 == 0 { num } else { num.neg() };
        rel_gens.push(sigma[kk - 1].mul(&den).sub(&signed));
    }
    let full = product.sum(&Ideal::new(work.clone(), rel_gens)?)?;
    let elim = full.eliminate(&b_vars);
    let out_ring = formula_ring(&shape.ctx, &new_x, &shape.blocks)?;
    let polys = elim
        .gens()
        .iter()
        .map(|g| g.remap_by_name(&out_ring))
        .collect::<Result<Vec<_>>>()?;
    let gamma = shape
        .gamma
        .iter()
        .map(|g| g.remap_by_name(&out_ring))
        .collect::<Result<Vec<_>>>()?;
    TameFormula::new(shape.ctx.clone(), new_x, shape.blocks.clone(), polys, gamma)
}

/// The coefficients `c0..c_{n-1}` of the monic polynomial with the given
/// roots, for presenting a rational conjugacy class explicitly.
pub fn conjugacy_class_poly(
    ctx: &PairContext,
    members: &[PairElement],
) -> Result<Vec<PairElement>> {
    if members.is_empty() {
        return Err(Error::ShapeMismatch("empty conjugacy class".into()));
    }
    let mut coeffs = vec![ctx.from_int(1)];
    for b in members {
        let mut next = vec![ctx.from_int(0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(b));
        }
        coeffs = next;
    }
    coeffs.pop();
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> PairContext {
        PairContext::new(2, 2).unwrap()
    }

    fn e(ctx: &PairContext, i: usize) -> PairElement {
        ctx.e_var(i).unwrap()
    }

    fn t(ctx: &PairContext, i: usize) -> PairElement {
        ctx.t_var(i).unwrap()
    }

    fn var(ring: &Arc<Ring>, name: &str) -> Polynomial {
        Polynomial::var(ring.clone(), ring.var_index(name).unwrap())
    }

    /// `∃ (z_0, z_1) ≠ 0 : z_1 − x·z_0 = 0`, i.e. "x lies in the small field".
    fn membership_formula(ctx: &PairContext, x: &str) -> TameFormula {
        let blocks = vec![ZetaBlock::projective("z", 2)];
        let ring = TameFormula::build_ring(ctx, &[x.to_string()], &blocks).unwrap();
        let p = var(&ring, "z_1").sub(&var(&ring, x).mul(&var(&ring, "z_0")));
        TameFormula::new(ctx.clone(), vec![x.to_string()], blocks, vec![p], vec![])
            .unwrap()
    }

    /// `∃ z ≠ 0 : z·q(x) = 0`, i.e. "q vanishes at x".
    fn vanishing_formula(ctx: &PairContext, x: &str, q: impl Fn(&Polynomial) -> Polynomial) -> TameFormula {
        let blocks = vec![ZetaBlock::projective("z", 1)];
        let ring = TameFormula::build_ring(ctx, &[x.to_string()], &blocks).unwrap();
        let p = q(&var(&ring, x)).mul(&var(&ring, "z_0"));
        TameFormula::new(ctx.clone(), vec![x.to_string()], blocks, vec![p], vec![])
            .unwrap()
    }

    /// `∃ z ≠ 0 : (x − u)·z = 0` with `u` a parameter slot.
    fn slot_shape(ctx: &PairContext) -> TameFormula {
        let names = vec!["x".to_string(), "u".to_string()];
        let blocks = vec![ZetaBlock::projective("z", 1)];
        let ring = TameFormula::build_ring(ctx, &names, &blocks).unwrap();
        let p = var(&ring, "x").sub(&var(&ring, "u")).mul(&var(&ring, "z_0"));
        TameFormula::new(ctx.clone(), names, blocks, vec![p], vec![]).unwrap()
    }

    #[test]
    fn pair_elements_reduce_and_display() {
        let ctx = ctx2();
        // (t1^2 - e1^2)/(t1 - e1) reduces to t1 + e1.
        let t1 = t(&ctx, 0);
        let e1 = e(&ctx, 0);
        let a = t1.mul(&t1).sub(&e1.mul(&e1)).div(&t1.sub(&e1)).unwrap();
        assert_eq!(a, t1.add(&e1));
        assert_eq!(a.to_string(), "(e1 + t1)");
        // Monic-denominator normalization shows up in the display.
        let t2 = t(&ctx, 1);
        let e2 = e(&ctx, 1);
        let b = e1.mul(&t1).add(&t2.mul(&t2)).div(&ctx.from_int(1).sub(&e2)).unwrap();
        assert_eq!(b.to_string(), "(-e1*t1 - t2^2)/(e2 - 1)");
        assert!(ctx.from_int(0).is_zero());
        assert!(e1.is_e_only(&ctx));
        assert!(!t1.is_e_only(&ctx));
        assert!(PairContext::new(0, 0).is_err());
        assert!(ctx.e_var(5).is_err());
        assert!(e1.div(&ctx.from_int(0)).is_err());
    }

    #[test]
    fn lambda_recovers_coefficients() {
        let ctx = ctx2();
        let (e1, e2) = (e(&ctx, 0), e(&ctx, 1));
        let (t1, t2) = (t(&ctx, 0), t(&ctx, 1));
        // λ(e1·t1; [t1]) = [e1]
        assert_eq!(lambda_eval(&ctx, &e1.mul(&t1), &[t1.clone()]).unwrap(), vec![e1.clone()]);
        // λ(t1^2; [t1]) = [0]: not in the span.
        assert_eq!(
            lambda_eval(&ctx, &t1.mul(&t1), &[t1.clone()]).unwrap(),
            vec![ctx.from_int(0)]
        );
        // λ(a; [a]) = [1] for a mixed element.
        let a = t1.add(&e2);
        assert_eq!(lambda_eval(&ctx, &a, &[a.clone()]).unwrap(), vec![ctx.from_int(1)]);
        // Two-element basis with fractional coefficients.
        let c = e1.div(&ctx.from_int(1).sub(&e2)).unwrap();
        let a0 = c.mul(&t1).add(&e2.mul(&t2)).add(&ctx.from_int(3));
        let got = lambda_eval(&ctx, &a0, &[t1.clone(), t2.clone(), ctx.from_int(1)]).unwrap();
        assert_eq!(got, vec![c, e2.clone(), ctx.from_int(3)]);
        // Empty basis.
        assert!(lambda_eval(&ctx, &e1, &[]).unwrap().is_empty());
    }

    #[test]
    fn lambda_dependent_or_unrelated_gives_zeros() {
        let ctx = ctx2();
        let t1 = t(&ctx, 0);
        let t2 = t(&ctx, 1);
        // Dependent basis: the decomposition is not unique, so all zeros.
        let dep = lambda_eval(&ctx, &t1, &[t1.clone(), t1.add(&t1)]).unwrap();
        assert!(dep.iter().all(PairElement::is_zero));
        // Outside the span.
        let out = lambda_eval(&ctx, &t2, &[t1.clone()]).unwrap();
        assert!(out.iter().all(PairElement::is_zero));
    }

    #[test]
    fn eval_scalar_block_forces_zero() {
        let ctx = ctx2();
        // ∃ z ≠ 0 : z·x = 0 holds exactly at x = 0.
        let phi = vanishing_formula(&ctx, "x", |x| x.clone());
        assert!(tame_eval(&phi, &[ctx.from_int(0)]).unwrap());
        assert!(!tame_eval(&phi, &[t(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&phi, &[e(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&phi, &[ctx.from_int(2)]).unwrap());
        // Wrong arity is a shape error.
        assert!(matches!(tame_eval(&phi, &[]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn eval_affine_line_detects_e_membership() {
        let ctx = ctx2();
        let phi = membership_formula(&ctx, "x");
        assert!(tame_eval(&phi, &[e(&ctx, 0)]).unwrap());
        assert!(tame_eval(&phi, &[ctx.from_ratio(-7, 3)]).unwrap());
        // Fractions are cleared before expansion.
        let inv = ctx.from_int(1).div(&e(&ctx, 0)).unwrap();
        assert!(tame_eval(&phi, &[inv]).unwrap());
        assert!(!tame_eval(&phi, &[t(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&phi, &[t(&ctx, 0).add(&e(&ctx, 1))]).unwrap());
    }

    #[test]
    fn eval_no_witness_formula_decides_directly() {
        let ctx = ctx2();
        let ring = TameFormula::build_ring(&ctx, &["x".to_string()], &[]).unwrap();
        let p = var(&ring, "x").sub(&var(&ring, "e1"));
        let phi = TameFormula::new(ctx.clone(), vec!["x".to_string()], vec![], vec![p], vec![])
            .unwrap();
        assert!(tame_eval(&phi, &[e(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&phi, &[e(&ctx, 1)]).unwrap());
        assert!(!tame_eval(&phi, &[t(&ctx, 0)]).unwrap());
    }

    #[test]
    fn formula_validation_rejects_bad_shapes() {
        let ctx = ctx2();
        // Duplicate block names.
        let blocks = vec![ZetaBlock::projective("z", 1), ZetaBlock::projective("z", 2)];
        assert!(matches!(
            TameFormula::new(ctx.clone(), vec![], blocks, vec![], vec![]),
            Err(Error::VariableClash(_))
        ));
        // Reserved block name.
        assert!(matches!(
            TameFormula::new(ctx.clone(), vec![], vec![ZetaBlock::projective("t", 1)], vec![], vec![]),
            Err(Error::VariableClash(_))
        ));
        // Arity zero.
        assert!(TameFormula::new(
            ctx.clone(),
            vec![],
            vec![ZetaBlock::projective("z", 0)],
            vec![],
            vec![]
        )
        .is_err());
        // Inhomogeneous in the witness block.
        let blocks = vec![ZetaBlock::projective("z", 1)];
        let ring = TameFormula::build_ring(&ctx, &[], &blocks).unwrap();
        let z = var(&ring, "z_0");
        let bad = z.add(&z.mul(&z));
        assert!(matches!(
            TameFormula::new(ctx.clone(), vec![], blocks.clone(), vec![bad], vec![]),
            Err(Error::NotBlockHomogeneous(_))
        ));
        // Side constraints must avoid t and x.
        let names = vec!["x".to_string()];
        let ring = TameFormula::build_ring(&ctx, &names, &blocks).unwrap();
        let g = var(&ring, "x").mul(&var(&ring, "z_0"));
        assert!(TameFormula::new(ctx.clone(), names, blocks, vec![], vec![g]).is_err());
    }

    #[test]
    fn instantiate_substitutes_and_clears() {
        let ctx = ctx2();
        let shape = slot_shape(&ctx);
        let inv = ctx.from_int(1).div(&e(&ctx, 0)).unwrap();
        let inst = instantiate(&shape, "u", &inv).unwrap();
        assert_eq!(inst.x_names(), ["x".to_string()]);
        let ring = inst.ring().clone();
        let expect = var(&ring, "e1").mul(&var(&ring, "x")).mul(&var(&ring, "z_0"))
            .sub(&var(&ring, "z_0"));
        assert_eq!(inst.polys(), [expect]);
        assert!(tame_eval(&inst, &[inv]).unwrap());
        assert!(!tame_eval(&inst, &[e(&ctx, 0)]).unwrap());
    }

    #[test]
    fn conjoin_with_tautology_preserves_semantics() {
        let ctx = ctx2();
        let phi = membership_formula(&ctx, "x");
        let top = TameFormula::tautology(ctx.clone(), vec!["y".to_string()]).unwrap();
        let both = tame_conjoin(&phi, &top).unwrap();
        assert_eq!(both.x_names(), ["x".to_string(), "y".to_string()]);
        assert_eq!(both.blocks().len(), 1);
        assert!(tame_eval(&both, &[e(&ctx, 0), t(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&both, &[t(&ctx, 0), e(&ctx, 0)]).unwrap());
        // Shared free variables are rejected.
        assert!(matches!(
            tame_conjoin(&phi, &membership_formula(&ctx, "x")),
            Err(Error::VariableClash(_))
        ));
    }

    #[test]
    fn conjoin_two_membership_formulas() {
        let ctx = ctx2();
        let phi = membership_formula(&ctx, "x");
        let psi = membership_formula(&ctx, "y");
        let both = tame_conjoin(&phi, &psi).unwrap();
        assert_eq!(both.blocks().len(), 1);
        assert_eq!(both.blocks()[0].arity, 4);
        assert!(both.blocks()[0].projective);
        let (e1, e2, t1) = (e(&ctx, 0), e(&ctx, 1), t(&ctx, 0));
        assert!(tame_eval(&both, &[e1.clone(), e2.clone()]).unwrap());
        assert!(!tame_eval(&both, &[e1.clone(), t1.clone()]).unwrap());
        assert!(!tame_eval(&both, &[t1.clone(), e2.clone()]).unwrap());
    }

    #[test]
    fn conjoin_matches_conjunction_on_samples() {
        let ctx = ctx2();
        // x·(x−1) = 0  and  y = e2.
        let one = Polynomial::one(ctx.ring().clone());
        let _ = one;
        let phi = vanishing_formula(&ctx, "x", |x| {
            x.mul(x).sub(x)
        });
        let psi = vanishing_formula(&ctx, "y", |y| {
            y.sub(&Polynomial::var(y.ring().clone(), y.ring().var_index("e2").unwrap()))
        });
        let both = tame_conjoin(&phi, &psi).unwrap();
        let xs = [ctx.from_int(0), ctx.from_int(1), ctx.from_int(2), e(&ctx, 0), t(&ctx, 0)];
        let ys = [e(&ctx, 1), t(&ctx, 1), ctx.from_int(0)];
        for x in &xs {
            for y in &ys {
                let lhs = tame_eval(&both, &[x.clone(), y.clone()]).unwrap();
                let rhs = tame_eval(&phi, &[x.clone()]).unwrap()
                    && tame_eval(&psi, &[y.clone()]).unwrap();
                assert_eq!(lhs, rhs, "conjunction mismatch at ({x}, {y})");
            }
        }
    }

    #[test]
    fn zariski_reductions() {
        let ctx = ctx2();
        // z·x = 0 reduces to the ideal (x).
        let scalar = vanishing_formula(&ctx, "x", |x| x.clone());
        let sys = tame_to_zariski_on_e(&scalar).unwrap();
        let r = sys.ring().clone();
        assert_eq!(sys.basis().elems(), [var(&r, "x")]);
        // z·(x^2 − 1) = 0 reduces to (x^2 − 1).
        let quad = vanishing_formula(&ctx, "x", |x| {
            x.mul(x).sub(&Polynomial::one(x.ring().clone()))
        });
        let sys = tame_to_zariski_on_e(&quad).unwrap();
        let r = sys.ring().clone();
        let x = var(&r, "x");
        assert_eq!(sys.basis().elems(), [x.mul(&x).sub(&Polynomial::one(r.clone()))]);
        // Membership in E holds at every point of the small field: zero ideal.
        let member = membership_formula(&ctx, "x");
        let sys = tame_to_zariski_on_e(&member).unwrap();
        assert!(sys.is_zero_ideal());
        // Formulas with t-coefficients do not reduce.
        let blocks = vec![ZetaBlock::projective("z", 1)];
        let ring = TameFormula::build_ring(&ctx, &["x".to_string()], &blocks).unwrap();
        let p = var(&ring, "x").sub(&var(&ring, "t1")).mul(&var(&ring, "z_0"));
        let witht =
            TameFormula::new(ctx.clone(), vec!["x".to_string()], blocks, vec![p], vec![])
                .unwrap();
        assert!(matches!(tame_to_zariski_on_e(&witht), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn zariski_membership_matches_eval() {
        let ctx = ctx2();
        let phi = vanishing_formula(&ctx, "x", |x| x.mul(x).sub(x));
        let sys = tame_to_zariski_on_e(&phi).unwrap();
        for b in [ctx.from_int(0), ctx.from_int(1), ctx.from_int(2), e(&ctx, 0), t(&ctx, 0)] {
            let via_ideal = zariski_membership(&sys, &ctx, &[b.clone()]).unwrap();
            let via_eval = tame_eval(&phi, &[b.clone()]).unwrap();
            assert_eq!(via_ideal, via_eval, "membership mismatch at {b}");
        }
    }

    #[test]
    fn lambda_field_generator_examples() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let q = BaseField::rationals();
        // A generic element has a trivial coefficient field.
        let lf = lambda_field_generators(&ctx, &[t1.clone()], &q).unwrap();
        assert!(lf.generators.is_empty());
        assert_eq!(lf.trdeg, 0);
        // A small-field element generates its own field.
        let lf = lambda_field_generators(&ctx, &[e1.clone()], &q).unwrap();
        assert_eq!(lf.generators, vec![e1.clone()]);
        assert_eq!(lf.trdeg, 1);
        // The slope of the line through (t1, e1·t1) generates Q(e1).
        let lf =
            lambda_field_generators(&ctx, &[t1.clone(), e1.mul(&t1)], &q).unwrap();
        assert_eq!(lf.generators, vec![ctx.from_int(1).div(&e1).unwrap()]);
        assert_eq!(lf.trdeg, 1);
        // Over Q(e1) the same tuple needs no new generators.
        let lf = lambda_field_generators(
            &ctx,
            &[t1.clone(), e1.mul(&t1)],
            &BaseField::with_e(vec![0]),
        )
        .unwrap();
        assert!(lf.generators.is_empty());
        assert_eq!(lf.trdeg, 0);
    }

    #[test]
    fn transcendence_degrees() {
        let ctx = ctx2();
        let (e1, e2) = (e(&ctx, 0), e(&ctx, 1));
        let (t1, t2) = (t(&ctx, 0), t(&ctx, 1));
        let over_e = TranscendenceBase::OverE;
        assert_eq!(transcendence_degree(&ctx, &[t1.clone()], &over_e).unwrap(), 1);
        assert_eq!(transcendence_degree(&ctx, &[e1.clone()], &over_e).unwrap(), 0);
        assert_eq!(
            transcendence_degree(&ctx, &[t1.clone(), t2.clone()], &over_e).unwrap(),
            2
        );
        assert_eq!(
            transcendence_degree(&ctx, &[t1.clone(), e1.mul(&t1)], &over_e).unwrap(),
            1
        );
        let over_q = TranscendenceBase::OverLambda(BaseField::rationals());
        assert_eq!(transcendence_degree(&ctx, &[e1.clone()], &over_q).unwrap(), 1);
        assert_eq!(
            transcendence_degree(&ctx, &[e1.clone(), e2.clone(), e1.mul(&e2)], &over_q)
                .unwrap(),
            2
        );
        let over_qe1 = TranscendenceBase::OverLambda(BaseField::with_e(vec![0]));
        assert_eq!(transcendence_degree(&ctx, &[e1.clone()], &over_qe1).unwrap(), 0);
        // t-elements have no degree over a λ-base.
        assert!(transcendence_degree(&ctx, &[t1.clone()], &over_q).is_err());
    }

    #[test]
    fn rm_rank_catalog() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let q = BaseField::rationals();
        let w = rm_rank(&ctx, &[t1.clone()], &q).unwrap();
        assert_eq!(w, OrdinalRank::new(1, 0));
        assert_eq!(w.to_string(), "w");
        let one = rm_rank(&ctx, &[e1.clone()], &q).unwrap();
        assert_eq!(one, OrdinalRank::new(0, 1));
        assert_eq!(one.to_string(), "1");
        let w1 = rm_rank(&ctx, &[t1.clone(), e1.mul(&t1)], &q).unwrap();
        assert_eq!(w1, OrdinalRank::new(1, 1));
        assert_eq!(w1.to_string(), "w+1");
        assert_eq!(OrdinalRank::new(2, 3).to_string(), "w*2+3");
        // Ordinal comparison is lexicographic.
        assert!(OrdinalRank::new(0, 5) < OrdinalRank::new(1, 0));
        assert!(OrdinalRank::new(1, 0) < OrdinalRank::new(1, 1));
        assert!(OrdinalRank::new(1, 1) < OrdinalRank::new(2, 0));
    }

    #[test]
    fn rm_rank_monotone_under_base_extension() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let q = BaseField::rationals();
        let qe1 = BaseField::with_e(vec![0]);
        for tuple in [vec![e1.clone()], vec![t1.clone(), e1.mul(&t1)], vec![t1.clone()]] {
            let over_q = rm_rank(&ctx, &tuple, &q).unwrap();
            let over_qe1 = rm_rank(&ctx, &tuple, &qe1).unwrap();
            assert!(over_qe1 <= over_q, "rank grew under base extension");
        }
        assert_eq!(rm_rank(&ctx, &[e1.clone()], &qe1).unwrap(), OrdinalRank::new(0, 0));
    }

    #[test]
    fn theta_shapes_and_satisfaction() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let q = BaseField::rationals();
        // θ of a small-field element: z_0·x + z_1 with σ = z_0.
        let th = emit_theta(&ctx, &[e1.clone()], &q).unwrap();
        let ring = th.formula().ring().clone();
        assert_eq!(th.formula().blocks(), [ZetaBlock::projective("z", 2)]);
        let expect = var(&ring, "x1").mul(&var(&ring, "z_0")).add(&var(&ring, "z_1"));
        assert_eq!(th.formula().polys(), [expect]);
        assert_eq!(th.sigma(), &var(&ring, "z_0"));
        assert!(th.formula().gamma().is_empty());
        // The defining point satisfies its own θ; generic points do not.
        assert!(theta_eval(&th, &[e1.clone()]).unwrap());
        assert!(theta_eval(&th, &[e(&ctx, 1)]).unwrap());
        assert!(!theta_eval(&th, &[t1.clone()]).unwrap());
        // θ of a line through the origin with small-field slope.
        let th = emit_theta(&ctx, &[t1.clone(), e1.mul(&t1)], &q).unwrap();
        let ring = th.formula().ring().clone();
        let expect = var(&ring, "x1").mul(&var(&ring, "z_0"))
            .add(&var(&ring, "x2").mul(&var(&ring, "z_1")));
        assert_eq!(th.formula().polys(), [expect]);
        assert!(theta_eval(&th, &[t1.clone(), e1.mul(&t1)]).unwrap());
        assert!(theta_eval(&th, &[t1.clone(), e(&ctx, 1).mul(&t1)]).unwrap());
        assert!(!theta_eval(&th, &[t1.clone(), t(&ctx, 1)]).unwrap());
    }

    #[test]
    fn theta_top_for_transcendental() {
        let ctx = ctx2();
        let th = emit_theta(&ctx, &[t(&ctx, 0)], &BaseField::rationals()).unwrap();
        assert!(th.formula().is_tautology());
        assert!(theta_eval(&th, &[t(&ctx, 1)]).unwrap());
        assert!(theta_eval(&th, &[e(&ctx, 0)]).unwrap());
    }

    #[test]
    fn chi_shapes() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let q = BaseField::rationals();
        // χ of a small-field element: one block, c1_0·x + c1_1 = 0.
        let chi = emit_chi(&ctx, &[e1.clone()], &q).unwrap();
        assert_eq!(chi.blocks(), [ZetaBlock::projective("c1", 2)]);
        let ring = chi.ring().clone();
        let expect = var(&ring, "x1").mul(&var(&ring, "c1_0")).add(&var(&ring, "c1_1"));
        assert_eq!(chi.polys(), [expect]);
        assert!(chi.gamma().is_empty());
        assert!(tame_eval(&chi, &[e1.clone()]).unwrap());
        assert!(!tame_eval(&chi, &[t1.clone()]).unwrap());
        // χ of the slope line: c1_0·x1 + c1_1·x2 = 0.
        let chi = emit_chi(&ctx, &[t1.clone(), e1.mul(&t1)], &q).unwrap();
        assert_eq!(chi.blocks(), [ZetaBlock::projective("c1", 2)]);
        let ring = chi.ring().clone();
        let expect = var(&ring, "x1").mul(&var(&ring, "c1_0"))
            .add(&var(&ring, "x2").mul(&var(&ring, "c1_1")));
        assert_eq!(chi.polys(), [expect]);
        assert!(chi.gamma().is_empty());
        assert!(tame_eval(&chi, &[t1.clone(), e1.mul(&t1)]).unwrap());
        // χ of a transcendental: tautology.
        let chi = emit_chi(&ctx, &[t1.clone()], &q).unwrap();
        assert!(chi.is_tautology());
        // Over Q(e1) the locus pins the coefficient tuple.
        let chi = emit_chi(&ctx, &[e1.clone()], &BaseField::with_e(vec![0])).unwrap();
        assert_eq!(chi.gamma().len(), 1);
        let ring = chi.ring().clone();
        let pinned = var(&ring, "c1_1").add(&var(&ring, "e1").mul(&var(&ring, "c1_0")));
        assert_eq!(chi.gamma(), [pinned]);
        assert!(tame_eval(&chi, &[e1.clone()]).unwrap());
        assert!(!tame_eval(&chi, &[e(&ctx, 1)]).unwrap());
    }

    #[test]
    fn chi_rank_bound_spot() {
        let ctx = ctx2();
        let e1 = e(&ctx, 0);
        let q = BaseField::rationals();
        let chi = emit_chi(&ctx, &[e1.clone()], &q).unwrap();
        let bound = rm_rank(&ctx, &[e1.clone()], &q).unwrap();
        for b in [e(&ctx, 1), ctx.from_int(7), e1.mul(&e1)] {
            assert!(tame_eval(&chi, &[b.clone()]).unwrap());
            let r = rm_rank(&ctx, &[b.clone()], &q).unwrap();
            assert!(r <= bound, "realization {b} exceeds the bound");
        }
    }

    #[test]
    fn minimal_formula_for_e_membership() {
        let ctx = ctx2();
        let e1 = e(&ctx, 0);
        let q = BaseField::rationals();
        let min = emit_minimal_tame(&ctx, &[e1.clone()], &q).unwrap();
        assert_eq!(min.blocks(), [ZetaBlock::projective("z", 2)]);
        let ring = min.ring().clone();
        let expect = var(&ring, "z_0").add(&var(&ring, "z_1").mul(&var(&ring, "x1")));
        assert_eq!(min.polys(), [expect]);
        assert!(min.gamma().is_empty());
        // The formula defines membership in the small field.
        assert!(tame_eval(&min, &[e1.clone()]).unwrap());
        assert!(tame_eval(&min, &[e(&ctx, 1)]).unwrap());
        assert!(tame_eval(&min, &[ctx.from_int(4)]).unwrap());
        assert!(!tame_eval(&min, &[t(&ctx, 0)]).unwrap());
        assert!(!tame_eval(&min, &[t(&ctx, 0).add(&e1)]).unwrap());
        // Interalgebraic points give literally the same formula.
        let min_sq = emit_minimal_tame(&ctx, &[e1.mul(&e1)], &q).unwrap();
        assert_eq!(min, min_sq);
    }

    #[test]
    fn minimal_tame_transcendental_is_tautology() {
        let ctx = ctx2();
        let min =
            emit_minimal_tame(&ctx, &[t(&ctx, 0)], &BaseField::rationals()).unwrap();
        assert!(min.is_tautology());
        assert!(tame_eval(&min, &[t(&ctx, 1)]).unwrap());
        assert!(tame_eval(&min, &[e(&ctx, 0)]).unwrap());
    }

    #[test]
    fn rewrite_follows_clearing() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let shape = slot_shape(&ctx);
        // Rewriting u = λ(e1·t1; [t1]) introduces a fresh nonzero pair ξ.
        let psi =
            rewrite_lambda_elim(&shape, Some("u"), &e1.mul(&t1), &[t1.clone()]).unwrap();
        assert_eq!(psi.x_names(), ["x".to_string()]);
        assert_eq!(psi.blocks().len(), 2);
        assert_eq!(psi.blocks()[1].arity, 2);
        let ring = psi.ring().clone();
        let xi0 = var(&ring, "w0_0");
        let xi1 = var(&ring, "w0_1");
        let eq = var(&ring, "x").mul(&var(&ring, "z_0")).mul(&xi0)
            .sub(&var(&ring, "z_0").mul(&xi1));
        let rel = var(&ring, "e1").mul(&var(&ring, "t1")).mul(&xi0)
            .sub(&var(&ring, "t1").mul(&xi1));
        assert_eq!(psi.polys(), [eq, rel]);
        // Slot occurring squared clears with ξ_0^2.
        let names = vec!["x".to_string(), "u".to_string()];
        let blocks = vec![ZetaBlock::projective("z", 1)];
        let ring2 = TameFormula::build_ring(&ctx, &names, &blocks).unwrap();
        let u = var(&ring2, "u");
        let p = var(&ring2, "x").sub(&u.mul(&u)).mul(&var(&ring2, "z_0"));
        let sq =
            TameFormula::new(ctx.clone(), names, blocks, vec![p], vec![]).unwrap();
        let psi2 = rewrite_lambda_elim(&sq, Some("u"), &e1.mul(&t1), &[t1.clone()]).unwrap();
        let ring = psi2.ring().clone();
        let xi0 = var(&ring, "w0_0");
        let xi1 = var(&ring, "w0_1");
        let eq = var(&ring, "x").mul(&var(&ring, "z_0")).mul(&xi0).mul(&xi0)
            .sub(&var(&ring, "z_0").mul(&xi1).mul(&xi1));
        assert_eq!(psi2.polys()[0], eq);
        // No designated slot: unchanged.
        let same = rewrite_lambda_elim(&shape, None, &e1, &[t1.clone()]).unwrap();
        assert_eq!(same, shape);
        // Zero λ-value is an error.
        assert!(matches!(
            rewrite_lambda_elim(&shape, Some("u"), &t(&ctx, 1), &[t1.clone()]),
            Err(Error::ZeroLambdaValue)
        ));
        assert!(matches!(
            rewrite_lambda_elim(&shape, Some("u"), &e1, &[]),
            Err(Error::ZeroLambdaValue)
        ));
    }

    #[test]
    fn rewrite_preserves_evaluation() {
        let ctx = ctx2();
        let (e1, t1) = (e(&ctx, 0), t(&ctx, 0));
        let shape = slot_shape(&ctx);
        let a0 = e1.mul(&t1);
        let basis = [t1.clone()];
        let lam = lambda_eval(&ctx, &a0, &basis).unwrap().remove(0);
        assert_eq!(lam, e1);
        let inst = instantiate(&shape, "u", &lam).unwrap();
        let psi = rewrite_lambda_elim(&shape, Some("u"), &a0, &basis).unwrap();
        for b in [e1.clone(), e(&ctx, 1), t1.clone(), ctx.from_int(3)] {
            assert_eq!(
                tame_eval(&inst, &[b.clone()]).unwrap(),
                tame_eval(&psi, &[b.clone()]).unwrap(),
                "rewrite changed the value at {b}"
            );
        }
    }

    #[test]
    fn disjoin_square_root_class() {
        let ctx = ctx2();
        let e1 = e(&ctx, 0);
        let shape = slot_shape(&ctx);
        // The class of the two square roots of e1: B^2 − e1.
        let coeffs = [e1.neg(), ctx.from_int(0)];
        let dis = disjoin_conjugates(&shape, "u", &coeffs).unwrap();
        assert_eq!(dis.x_names(), ["x".to_string()]);
        assert_eq!(dis.blocks(), shape.blocks());
        let ring = dis.ring().clone();
        let x = var(&ring, "x");
        let z = var(&ring, "z_0");
        let expect = x.mul(&x).sub(&var(&ring, "e1")).mul(&z).mul(&z);
        assert_eq!(dis.polys(), [expect]);
        // No presented element squares to e1.
        assert!(!tame_eval(&dis, &[e1.clone()]).unwrap());
        assert!(!tame_eval(&dis, &[t(&ctx, 0)]).unwrap());
    }

    #[test]
    fn disjoin_rational_class_matches_disjunction() {
        let ctx = ctx2();
        let shape = slot_shape(&ctx);
        // Class {1, 2} presented by B^2 − 3B + 2.
        let members = [ctx.from_int(1), ctx.from_int(2)];
        let coeffs = conjugacy_class_poly(&ctx, &members).unwrap();
        assert_eq!(coeffs, vec![ctx.from_int(2), ctx.from_int(-3)]);
        let dis = disjoin_conjugates(&shape, "u", &coeffs).unwrap();
        for b in [ctx.from_int(1), ctx.from_int(2), ctx.from_int(3), e(&ctx, 0), t(&ctx, 0)] {
            let direct = members.iter().any(|m| {
                let inst = instantiate(&shape, "u", m).unwrap();
                tame_eval(&inst, &[b.clone()]).unwrap()
            });
            assert_eq!(
                tame_eval(&dis, &[b.clone()]).unwrap(),
                direct,
                "disjunction mismatch at {b}"
            );
        }
        // A single-member class is the plain instance, up to equivalence.
        let single = conjugacy_class_poly(&ctx, &[e(&ctx, 1)]).unwrap();
        let dis = disjoin_conjugates(&shape, "u", &single).unwrap();
        let inst = instantiate(&shape, "u", &e(&ctx, 1)).unwrap();
        for b in [e(&ctx, 1), e(&ctx, 0), ctx.from_int(1), t(&ctx, 0)] {
            assert_eq!(
                tame_eval(&dis, &[b.clone()]).unwrap(),
                tame_eval(&inst, &[b.clone()]).unwrap()
            );
        }
        // Errors: unknown parameter, empty class, class off the e-part.
        assert!(disjoin_conjugates(&shape, "v", &coeffs).is_err());
        assert!(disjoin_conjugates(&shape, "u", &[]).is_err());
        assert!(disjoin_conjugates(&shape, "u", &[t(&ctx, 0)]).is_err());
    }
}
