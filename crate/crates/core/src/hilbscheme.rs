//! The Hilbert scheme as computable data: for an ambient projective
//! dimension `n` and a Hilbert polynomial `Q`, saturated homogeneous
//! ideals with Hilbert polynomial `Q` correspond bijectively to points of
//! a closed subvariety of the Plücker space of `N0`-dimensional subspaces
//! of the degree-`d0` forms, where `d0` is the Gotzmann number of `Q` and
//! `N0 = C(d0+n, n) − Q(d0)`.
//!
//! The correspondence sends an ideal `I` to (the Plücker point of) its
//! slice `I_{d0}`, and a point `η` to the saturation of the ideal
//! generated by the contraction forms `e_S* ⌐ η`.  The defining conditions
//! of the subvariety are the Grassmann relations together with rank bounds
//! `dim⟨U⟩_d ≤ C(d+n, n) − Q(d)` on a verification window of degrees; the
//! rank bounds are stored as matrices of η-linear forms and decided
//! pointwise by row reduction (their determinantal expansions are
//! available on demand).  All templates have integer coefficients and can
//! be instantiated over any coefficient field.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exterior::{
    contraction, grassmann_equations, index_subsets, is_decomposable, plucker_coordinates,
    ExteriorVector, PluckerPoint,
};
use crate::field::{FieldKind, Scalar};
use crate::groebner::Ideal;
use crate::hilbert::{graded_piece, hilbert_polynomial, is_saturated, saturate};
use crate::matrix::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::numpoly::{binomial, NumericalPolynomial};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Degrees past `d0` whose rank conditions are pre-built (the `d0` level
/// itself is implied by decomposability and omitted).
pub const DEFAULT_WINDOW: u32 = 1;

/// Guard for symbolic determinant expansion.
const MINOR_EXPANSION_CAP: usize = 5_000;

/// A rank bound `rank(rows(η)) ≤ bound` on the span of the contraction
/// forms in one degree; `rows` holds η-linear entries over the degree-`d`
/// monomial frame.
#[derive(Debug, Clone)]
pub struct RankCondition {
    pub degree: u32,
    pub bound: usize,
    pub rows: Vec<Vec<Polynomial>>,
}

/// Everything needed to work with the scheme for one `(n, Q)`.
#[derive(Debug, Clone)]
pub struct HilbertSchemeData {
    n: u32,
    q: NumericalPolynomial,
    d0: u32,
    n0: u32,
    s: u32,
    template_ring: Arc<Ring>,
    monomials_d0: Vec<Monomial>,
    eta_subsets: Vec<Vec<u32>>,
    s_template: Vec<Polynomial>,
    grassmann: Vec<Polynomial>,
    rank_window: Vec<RankCondition>,
}

fn usize_binomial(n: u32, k: u32) -> usize {
    binomial(&BigInt::from(n), k).to_usize().expect("frame size fits in usize")
}

impl HilbertSchemeData {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> &NumericalPolynomial {
        &self.q
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    /// Dimension of the degree-`d0` slice of the ideals on the scheme.
    pub fn n0(&self) -> u32 {
        self.n0
    }

    /// Ambient Plücker space parameters: grade `N0` subspaces of `F^s`.
    pub fn ambient(&self) -> (u32, u32) {
        (self.n0, self.s)
    }

    /// The ring `Q[X; η]` the symbolic templates live in.
    pub fn template_ring(&self) -> &Arc<Ring> {
        &self.template_ring
    }

    /// The degree-`d0` monomial frame identifying `F^s` with the forms.
    pub fn frame(&self) -> &[Monomial] {
        &self.monomials_d0
    }

    /// Subset labelling each η variable (grade-`N0` subsets, lex order).
    pub fn eta_subsets(&self) -> &[Vec<u32>] {
        &self.eta_subsets
    }

    /// Generator templates: one bihomogeneous polynomial (degree `d0` in
    /// `X`, linear in η) per grade-`N0−1` covector.
    pub fn s_template(&self) -> &[Polynomial] {
        &self.s_template
    }

    /// The Grassmann relations of the ambient Plücker space.
    pub fn grassmann_relations(&self) -> &[Polynomial] {
        &self.grassmann
    }

    /// Pre-built rank conditions for the verification window.
    pub fn rank_window(&self) -> &[RankCondition] {
        &self.rank_window
    }

    fn x_vars(&self) -> Vec<u32> {
        (0..=self.n).collect()
    }

    /// Positions of the degree-`d` monomials (descending ring order) by
    /// exponent vector.
    fn frame_positions(&self, d: u32) -> (Vec<Monomial>, HashMap<Vec<u32>, usize>) {
        let frame = monomials_of_degree(&self.x_vars(), d, self.template_ring.order());
        let mut pos = HashMap::with_capacity(frame.len());
        for (i, m) in frame.iter().enumerate() {
            pos.insert(exps_of(m, self.n + 1), i);
        }
        (frame, pos)
    }

    /// The rank condition for an arbitrary degree `d > d0`, or `None` when
    /// it is structurally vacuous (too few rows to exceed the bound).
    pub fn rank_condition(&self, d: u32) -> Result<Option<RankCondition>> {
        if d <= self.d0 {
            return Err(Error::DegreeRange(format!(
                "rank conditions apply above the base degree {}",
                self.d0
            )));
        }
        let bound_big = binomial(&BigInt::from(d + self.n), self.n) - self.q.eval_i64(d as i64);
        let bound = bound_big
            .to_usize()
            .ok_or_else(|| Error::DegreeRange(format!("negative rank bound in degree {d}")))?;
        let rows = match self.rank_condition_rows(d)? {
            Some(rows) => rows,
            None => return Ok(None),
        };
        if rows.len() <= bound {
            return Ok(None); // structurally vacuous
        }
        Ok(Some(RankCondition { degree: d, bound, rows }))
    }

    /// Numeric span rows in degree `d ≥ d0` at a concrete point: the
    /// coefficient rows of all `M · (e_S* ⌐ η)` over the degree-`d` frame.
    fn span_rows_at(&self, eta: &PluckerPoint, d: u32) -> Vec<Vec<Scalar>> {
        let field = eta.multivector().field().clone();
        let (frame, pos) = self.frame_positions(d);
        let mut rows = Vec::new();
        for s_star in index_subsets(self.n0.saturating_sub(1), self.s) {
            if self.n0 == 0 {
                break;
            }
            let w = contraction(&s_star, eta.multivector()).expect("grades fit");
            if w.iter().all(|c| c.is_zero()) {
                continue;
            }
            for m in monomials_of_degree(&self.x_vars(), d - self.d0, self.template_ring.order()) {
                let mut row = vec![field.zero(); frame.len()];
                for (k, c) in w.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let target = m.mul(&self.monomials_d0[k]);
                    row[pos[&exps_of(&target, self.n + 1)]] = c.clone();
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Validates that `eta` lives in the ambient Plücker space.
    fn check_ambient(&self, eta: &PluckerPoint) -> Result<()> {
        if eta.grade() != self.n0 || eta.dim() != self.s {
            return Err(Error::OutsideUniverse(format!(
                "expected grade {} on dimension {}, got grade {} on dimension {}",
                self.n0,
                self.s,
                eta.grade(),
                eta.dim()
            )));
        }
        Ok(())
    }

    /// Scheme membership: Grassmann relations plus the rank bounds for
    /// degrees `d0+1 … d0+window`.
    pub fn on_scheme_windowed(&self, eta: &PluckerPoint, window: u32) -> Result<bool> {
        self.check_ambient(eta)?;
        if !is_decomposable(eta.multivector()) {
            return Ok(false);
        }
        let field = eta.multivector().field().clone();
        for d in self.d0 + 1..=self.d0 + window {
            let bound_big =
                binomial(&BigInt::from(d + self.n), self.n) - self.q.eval_i64(d as i64);
            let Some(bound) = bound_big.to_usize() else { return Ok(false) };
            let rows = self.span_rows_at(eta, d);
            if rows.is_empty() {
                continue;
            }
            let rank = Matrix::from_rows(field.clone(), rows)?.rank();
            if rank > bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn on_scheme(&self, eta: &PluckerPoint) -> Result<bool> {
        self.on_scheme_windowed(eta, DEFAULT_WINDOW)
    }

    /// Instantiates the generator templates at a concrete point, in the
    /// given coefficient ring (any field; names are free, variable count
    /// must be `n+1`).
    pub fn generators_at(&self, eta: &PluckerPoint, x_ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
        self.check_ambient(eta)?;
        if x_ring.num_vars() != (self.n + 1) as usize {
            return Err(Error::RingMismatch(format!(
                "coefficient ring must have {} variables",
                self.n + 1
            )));
        }
        let mut gens = Vec::new();
        if self.n0 == 0 {
            return Ok(gens);
        }
        for s_star in index_subsets(self.n0 - 1, self.s) {
            let w = contraction(&s_star, eta.multivector()).expect("grades fit");
            let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
            for (k, c) in w.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((self.monomials_d0[k].clone(), c.clone()));
                }
            }
            let g = Polynomial::from_terms(x_ring.clone(), terms);
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(gens)
    }

    /// Membership of the degree-`d` form with coefficient tuple `c` (over
    /// the degree-`d` monomial frame, descending order) in the ideal of
    /// `eta`.  Degrees below `d0` reduce to degree `d + d0` by
    /// multiplication with each `X_i^{d0}`.
    pub fn membership_test(&self, c: &[Scalar], eta: &PluckerPoint, d: u32) -> Result<bool> {
        self.check_ambient(eta)?;
        let size = usize_binomial(d + self.n, self.n);
        if c.len() != size {
            return Err(Error::IndexMismatch(format!(
                "expected {size} coefficients for degree {d}, got {}",
                c.len()
            )));
        }
        if c.iter().all(|x| x.is_zero()) {
            return Ok(true);
        }
        if d < self.d0 {
            let (frame, _) = self.frame_positions(d);
            let (_, pos_up) = self.frame_positions(d + self.d0);
            for i in 0..=self.n {
                let shift = Monomial::var_pow(i, self.d0);
                let size_up = usize_binomial(d + self.d0 + self.n, self.n);
                let mut up = vec![eta.multivector().field().zero(); size_up];
                for (j, m) in frame.iter().enumerate() {
                    if c[j].is_zero() {
                        continue;
                    }
                    let target = m.mul(&shift);
                    up[pos_up[&exps_of(&target, self.n + 1)]] = c[j].clone();
                }
                if !self.membership_test(&up, eta, d + self.d0)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let field = eta.multivector().field().clone();
        let rows = self.span_rows_at(eta, d);
        let base_rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(field.clone(), rows.clone())?.rank()
        };
        let mut aug = rows;
        aug.push(c.to_vec());
        let aug_rank = Matrix::from_rows(field, aug)?.rank();
        Ok(aug_rank == base_rank)
    }

    /// The degree-`d` membership equations as explicit polynomials in the
    /// form coefficients `c` and the Plücker coordinates η: all
    /// `(bound+1)`-minors of the span matrix augmented with the row `c`.
    pub fn sd_equations(&self, d: u32) -> Result<Vec<Polynomial>> {
        let size = usize_binomial(d + self.n, self.n);
        let c_names: Vec<String> = (0..size).map(|i| format!("c{i}")).collect();
        let eta_names: Vec<String> = self
            .eta_subsets
            .iter()
            .map(|t| eta_name(t))
            .collect();
        let mut blocks: Vec<(&str, Vec<&str>)> = Vec::new();
        blocks.push(("c", c_names.iter().map(|s| s.as_str()).collect()));
        blocks.push(("eta", eta_names.iter().map(|s| s.as_str()).collect()));
        let spec: Vec<(&str, &[&str])> =
            blocks.iter().map(|(b, v)| (*b, v.as_slice())).collect();
        let ring = Ring::new(FieldKind::Rationals, &spec)?;

        if d < self.d0 {
            // reduce to degree d + d0 via the X_i^{d0} rule: substitute the
            // shifted coefficient rows into the higher-degree equations
            let mut out = Vec::new();
            let (frame, _) = self.frame_positions(d);
            let (_, pos_up) = self.frame_positions(d + self.d0);
            let upper = self.sd_matrix(d + self.d0)?;
            for i in 0..=self.n {
                let shift = Monomial::var_pow(i, self.d0);
                let size_up = usize_binomial(d + self.d0 + self.n, self.n);
                let mut c_row = vec![Polynomial::zero(ring.clone()); size_up];
                for (j, m) in frame.iter().enumerate() {
                    let target = m.mul(&shift);
                    c_row[pos_up[&exps_of(&target, self.n + 1)]] =
                        Polynomial::var(ring.clone(), j as u32);
                }
                out.extend(self.minors_with_row(&upper, c_row, &ring)?);
            }
            dedup_polys(&mut out);
            return Ok(out);
        }
        let (rows_bound, _) = self.sd_matrix(d)?;
        let c_row: Vec<Polynomial> =
            (0..size).map(|i| Polynomial::var(ring.clone(), i as u32)).collect();
        let mut out = self.minors_with_row(&(rows_bound, d), c_row, &ring)?;
        dedup_polys(&mut out);
        Ok(out)
    }

    /// Span rows for `sd_equations`, as η-linear polynomials, plus degree.
    fn sd_matrix(&self, d: u32) -> Result<(Vec<Vec<Polynomial>>, u32)> {
        match self.rank_condition_rows(d)? {
            Some(rows) => Ok((rows, d)),
            None => Ok((Vec::new(), d)),
        }
    }

    fn rank_condition_rows(&self, d: u32) -> Result<Option<Vec<Vec<Polynomial>>>> {
        if d < self.d0 {
            return Err(Error::DegreeRange("span rows exist from the base degree on".into()));
        }
        let (frame, pos) = self.frame_positions(d);
        let zero = Polynomial::zero(self.template_ring.clone());
        let mut rows: Vec<Vec<Polynomial>> = Vec::new();
        for st in &self.s_template {
            let parts = st.collect_by(&self.x_vars());
            for m in monomials_of_degree(&self.x_vars(), d - self.d0, self.template_ring.order()) {
                let mut row = vec![zero.clone(); frame.len()];
                for (xm, coeff) in &parts {
                    let target = m.mul(xm);
                    let p = pos[&exps_of(&target, self.n + 1)];
                    row[p] = row[p].add(coeff);
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            Ok(None)
        } else {
            Ok(Some(rows))
        }
    }

    /// All `(k+1)`-minors of the span matrix at degree `d` augmented with
    /// the given extra row (in `ring`, which must contain the η variables
    /// by name), where `k` is the rank bound of that degree.
    fn minors_with_row(
        &self,
        upper: &(Vec<Vec<Polynomial>>, u32),
        c_row: Vec<Polynomial>,
        ring: &Arc<Ring>,
    ) -> Result<Vec<Polynomial>> {
        let (rows_t, d) = upper;
        let bound_big = binomial(&BigInt::from(*d + self.n), self.n) - self.q.eval_i64(*d as i64);
        let bound = bound_big
            .to_usize()
            .ok_or_else(|| Error::DegreeRange(format!("negative rank bound in degree {d}")))?;
        // move the η-linear rows into the combined ring
        let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(rows_t.len() + 1);
        for r in rows_t {
            let moved: Result<Vec<Polynomial>> = r.iter().map(|p| p.remap_by_name(ring)).collect();
            rows.push(moved?);
        }
        let cols = c_row.len();
        rows.push(c_row);
        let k = bound + 1;
        if k > rows.len() || k > cols {
            return Ok(Vec::new());
        }
        // every minor must use the c row, otherwise it constrains η only
        let c_index = rows.len() - 1;
        let row_choices: Vec<Vec<usize>> = subsets_containing(rows.len(), k, c_index);
        let col_choices: Vec<Vec<usize>> = subsets_of(cols, k);
        if row_choices.len().saturating_mul(col_choices.len()) > MINOR_EXPANSION_CAP {
            return Err(Error::Invalid(format!(
                "minor expansion too large in degree {d}; evaluate membership pointwise instead"
            )));
        }
        let mut out = Vec::new();
        for rc in &row_choices {
            for cc in &col_choices {
                let det = poly_det(&rows, rc, cc, ring);
                if !det.is_zero() {
                    out.push(det);
                }
            }
        }
        Ok(out)
    }

    /// Deterministic text form: parameters, frame, templates (in covector
    /// order), Grassmann relations, and the rank-condition window.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let coords: Vec<String> = self.q.coords().iter().map(|c| c.to_string()).collect();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "Q [{}]", coords.join(", ")).unwrap();
        writeln!(out, "Q(d) = {}", self.q.display_power('d')).unwrap();
        writeln!(out, "d0 {}", self.d0).unwrap();
        writeln!(out, "N0 {}", self.n0).unwrap();
        writeln!(out, "ambient grade {} of dimension {}", self.n0, self.s).unwrap();
        let frame: Vec<String> = self
            .monomials_d0
            .iter()
            .map(|m| self.template_ring.format_monomial(m))
            .collect();
        writeln!(out, "frame [{}]", frame.join(", ")).unwrap();
        writeln!(out, "grassmann {}", self.grassmann.len()).unwrap();
        for g in &self.grassmann {
            writeln!(out, "  {g}").unwrap();
        }
        writeln!(out, "templates {}", self.s_template.len()).unwrap();
        for (s_star, t) in index_subsets(self.n0.saturating_sub(1), self.s)
            .iter()
            .zip(&self.s_template)
        {
            let label: Vec<String> = s_star.iter().map(|i| i.to_string()).collect();
            writeln!(out, "  S[{}] = {}", label.join(","), t).unwrap();
        }
        writeln!(out, "rank-conditions {}", self.rank_window.len()).unwrap();
        for rc in &self.rank_window {
            writeln!(
                out,
                "  degree {} bound {} rows {} cols {}",
                rc.degree,
                rc.bound,
                rc.rows.len(),
                rc.rows.first().map(|r| r.len()).unwrap_or(0)
            )
            .unwrap();
            for row in &rc.rows {
                let entries: Vec<String> = row.iter().map(|p| format!("{p}")).collect();
                writeln!(out, "    [{}]", entries.join(" | ")).unwrap();
            }
        }
        out
    }
}

fn eta_name(subset: &[u32]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!("h{}", parts.join("_"))
}

fn exps_of(m: &Monomial, nvars: u32) -> Vec<u32> {
    (0..nvars).map(|v| m.exp(v)).collect()
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..=n.saturating_sub(k) {
            acc.push(i);
            rec(i + 1, n, k - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn subsets_containing(n: usize, k: usize, forced: usize) -> Vec<Vec<usize>> {
    subsets_of(n - 1, k - 1)
        .into_iter()
        .map(|mut s| {
            // indices skip `forced` (which is the last row here)
            s.push(forced);
            s
        })
        .collect()
}

/// Determinant of the chosen square submatrix by Laplace expansion.
pub(crate) fn poly_det(
    rows: &[Vec<Polynomial>],
    row_idx: &[usize],
    col_idx: &[usize],
    ring: &Arc<Ring>,
) -> Polynomial {
    if row_idx.is_empty() {
        return Polynomial::one(ring.clone());
    }
    let mut acc = Polynomial::zero(ring.clone());
    let r0 = row_idx[0];
    let rest: Vec<usize> = row_idx[1..].to_vec();
    for (j, &c) in col_idx.iter().enumerate() {
        let e = &rows[r0][c];
        if e.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> =
            col_idx.iter().enumerate().filter(|&(jj, _)| jj != j).map(|(_, &cc)| cc).collect();
        let minor = poly_det(rows, &rest, &sub_cols, ring);
        let term = e.mul(&minor);
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn dedup_polys(polys: &mut Vec<Polynomial>) {
    let mut seen: Vec<Polynomial> = Vec::new();
    for p in polys.drain(..) {
        let m = p.monic();
        if !seen.contains(&m) {
            seen.push(m);
        }
    }
    *polys = seen;
}

/// Builds the scheme data for ambient projective dimension `n` and
/// Hilbert polynomial `q`.
pub fn hilbert_scheme_data(n: u32, q: &NumericalPolynomial) -> Result<HilbertSchemeData> {
    let d0 = crate::hilbert::gotzmann_number(q)?;
    let s_big = binomial(&BigInt::from(d0 + n), n);
    let s = s_big.to_u32().ok_or_else(|| Error::DegreeRange("frame too large".into()))?;
    let n0_big = s_big - q.eval_i64(d0 as i64);
    let n0 = n0_big.to_u32().ok_or_else(|| {
        Error::DegreeRange("Q exceeds the full slice dimension at d0".into())
    })?;

    // the template ring Q[X0..Xn; h_T]
    let x_names: Vec<String> = (0..=n).map(|i| format!("X{i}")).collect();
    let eta_subsets = index_subsets(n0, s);
    let eta_names: Vec<String> = eta_subsets.iter().map(|t| eta_name(t)).collect();
    let x_refs: Vec<&str> = x_names.iter().map(|s| s.as_str()).collect();
    let eta_refs: Vec<&str> = eta_names.iter().map(|s| s.as_str()).collect();
    let template_ring =
        Ring::new(FieldKind::Rationals, &[("X", x_refs.as_slice()), ("eta", eta_refs.as_slice())])?;

    let x_vars: Vec<u32> = (0..=n).collect();
    let monomials_d0 = monomials_of_degree(&x_vars, d0, template_ring.order());

    // generator templates: Σ_{T ⊇ S} sign · h_T · M_{T∖S}
    let mut s_template = Vec::new();
    if n0 > 0 {
        for s_star in index_subsets(n0 - 1, s) {
            let mut acc = Polynomial::zero(template_ring.clone());
            for (ti, t) in eta_subsets.iter().enumerate() {
                if let Some((rest, sign)) = contract_label(&s_star, t) {
                    let xm = monomials_d0[rest as usize].clone();
                    let h = Monomial::var(n + 1 + ti as u32);
                    let mono = xm.mul(&h);
                    let c = Scalar::from_int(sign as i64);
                    acc = acc.add(&Polynomial::monomial(template_ring.clone(), mono, c));
                }
            }
            s_template.push(acc);
        }
    }

    // Grassmann relations of the ambient space, dropped when empty
    let grassmann = if n0 == 0 {
        Vec::new()
    } else {
        grassmann_equations(FieldKind::Rationals, n0, s)?
    };

    let mut data = HilbertSchemeData {
        n,
        q: q.clone(),
        d0,
        n0,
        s,
        template_ring,
        monomials_d0,
        eta_subsets,
        s_template,
        grassmann,
        rank_window: Vec::new(),
    };

    let mut window = Vec::new();
    for d in d0 + 1..=d0 + DEFAULT_WINDOW {
        if let Some(rc) = data.rank_condition(d)? {
            window.push(rc);
        }
    }
    data.rank_window = window;
    Ok(data)
}

/// Contraction on labels: `e_S* ⌐ e_T` when `|T| = |S| + 1`, returning the
/// leftover index and the sign.
fn contract_label(s_star: &[u32], t: &[u32]) -> Option<(u32, i32)> {
    let mut rest: Option<u32> = None;
    let mut it = s_star.iter().peekable();
    for &x in t {
        if it.peek() == Some(&&x) {
            it.next();
        } else if rest.is_none() {
            rest = Some(x);
        } else {
            return None;
        }
    }
    if it.peek().is_some() {
        return None;
    }
    let j = rest?;
    let inversions = s_star.iter().filter(|&&s| s > j).count();
    Some((j, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// A validated point of the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemePoint {
    eta: PluckerPoint,
}

impl SchemePoint {
    pub fn new(eta: PluckerPoint, data: &HilbertSchemeData) -> Result<Self> {
        if !data.on_scheme(&eta)? {
            return Err(Error::OffScheme);
        }
        Ok(SchemePoint { eta })
    }

    pub fn plucker(&self) -> &PluckerPoint {
        &self.eta
    }
}

/// The scheme point of a saturated ideal with the right Hilbert
/// polynomial: the Plücker coordinates of its degree-`d0` slice.
pub fn point_from_ideal(i: &Ideal, data: &HilbertSchemeData) -> Result<SchemePoint> {
    if !is_saturated(i)? {
        return Err(Error::Unsaturated);
    }
    let q = hilbert_polynomial(i)?;
    if q != *data.q() {
        return Err(Error::HilbertMismatch {
            expected: data.q().display_power('d'),
            found: q.display_power('d'),
        });
    }
    let field = i.ring().field().clone();
    if data.n0() == 0 {
        let unit = ExteriorVector::basis(field, data.ambient().1, &[])?;
        let eta = PluckerPoint::new(unit)?;
        return SchemePoint::new(eta, data);
    }
    let piece = graded_piece(i, data.d0())?;
    if piece.dim() != data.n0() as usize {
        return Err(Error::GradedDimensionMismatch {
            expected: data.n0() as usize,
            found: piece.dim(),
        });
    }
    // rows over the ideal ring's frame; realign onto the template frame
    let tpl_exps: Vec<Vec<u32>> = data
        .frame()
        .iter()
        .map(|m| exps_of(m, data.n() + 1))
        .collect();
    let mut rows = Vec::with_capacity(piece.dim());
    for r in 0..piece.dim() {
        let mut row = vec![field.zero(); data.frame().len()];
        for (j, m) in piece.monomials().iter().enumerate() {
            let e = exps_of(m, data.n() + 1);
            let p = tpl_exps.iter().position(|x| *x == e).expect("same frame");
            row[p] = piece.basis().at(r, j).clone();
        }
        rows.push(row);
    }
    let eta = plucker_coordinates(&field, &rows)?;
    SchemePoint::new(eta, data)
}

/// The saturated ideal of a scheme point, generated by the instantiated
/// templates, in the given coefficient ring.
pub fn ideal_from_point(
    pt: &SchemePoint,
    data: &HilbertSchemeData,
    x_ring: &Arc<Ring>,
) -> Result<Ideal> {
    let gens = data.generators_at(pt.plucker(), x_ring)?;
    let raw = Ideal::new(x_ring.clone(), gens)?;
    if raw.is_zero_ideal() {
        return Ok(raw);
    }
    saturate(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;

    fn q_const(v: i64) -> NumericalPolynomial {
        NumericalPolynomial::constant(v)
    }

    fn qring(names: &[&str]) -> Arc<Ring> {
        Ring::simple(FieldKind::Rationals, names).unwrap()
    }

    fn p(ring: &Arc<Ring>, terms: &[(i64, &[(u32, u32)])]) -> Polynomial {
        Polynomial::from_int_terms(ring, terms)
    }

    #[test]
    fn small_scheme_parameters() {
        // (n=1, Q=1): points of the projective line
        let d = hilbert_scheme_data(1, &q_const(1)).unwrap();
        assert_eq!((d.d0(), d.n0(), d.ambient()), (1, 1, (1, 2)));
        assert!(d.grassmann_relations().is_empty());
        assert!(d.rank_window().is_empty());
        assert_eq!(d.s_template().len(), 1);

        // (n=1, Q=2): pairs of points, all of P^2
        let d2 = hilbert_scheme_data(1, &q_const(2)).unwrap();
        assert_eq!((d2.d0(), d2.n0(), d2.ambient()), (2, 1, (1, 3)));
        assert!(d2.grassmann_relations().is_empty());
        assert!(d2.rank_window().is_empty());

        // (n=2, Q=1): pencils of lines through a point, all of Gr_2(F^3)
        let d3 = hilbert_scheme_data(2, &q_const(1)).unwrap();
        assert_eq!((d3.d0(), d3.n0(), d3.ambient()), (1, 2, (2, 3)));
        assert!(d3.grassmann_relations().is_empty());
        // the degree-2 condition exists but holds on the whole Grassmannian
        for t in [vec![0, 1], vec![0, 2], vec![1, 2]] {
            let eta = PluckerPoint::new(
                ExteriorVector::basis(FieldKind::Rationals, 3, &t).unwrap(),
            )
            .unwrap();
            assert!(d3.on_scheme(&eta).unwrap());
            assert!(d3.on_scheme_windowed(&eta, 4).unwrap());
        }
    }

    #[test]
    fn templates_have_integer_coefficients() {
        for (n, q) in [(1u32, q_const(1)), (1, q_const(3)), (2, q_const(1))] {
            let d = hilbert_scheme_data(n, &q).unwrap();
            for t in d.s_template() {
                for (_, c) in t.terms() {
                    let r = c.as_rational().expect("rational template");
                    assert!(r.is_integer());
                }
            }
        }
    }

    #[test]
    fn point_from_ideal_examples() {
        let data = hilbert_scheme_data(1, &q_const(1)).unwrap();
        let r = qring(&["x0", "x1"]);

        let i1 = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(1, 1)])])]).unwrap();
        let pt = point_from_ideal(&i1, &data).unwrap();
        // frame is (x0, x1); I_1 = span{x1} → (0 : 1)
        assert_eq!(pt.plucker().multivector().coords(), &[(vec![1], Scalar::from_int(1))]);

        // x1 − 2x0 spans the same point as the projective tuple (−2 : 1)
        let i2 = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(1, 1)]), (-2, &[(0, 1)])])]).unwrap();
        let pt2 = point_from_ideal(&i2, &data).unwrap();
        let expected = PluckerPoint::new(
            ExteriorVector::from_coords(
                FieldKind::Rationals,
                1,
                2,
                vec![(vec![0], Scalar::from_int(-2)), (vec![1], Scalar::from_int(1))],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(pt2.plucker(), &expected);

        // wrong Hilbert polynomial is rejected (x1² is saturated, Q = 2)
        let sq = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(1, 2)])])]).unwrap();
        assert!(matches!(
            point_from_ideal(&sq, &data),
            Err(Error::HilbertMismatch { .. })
        ));
        // the irrelevant ideal is not saturated
        let both = Ideal::new(
            r.clone(),
            vec![p(&r, &[(1, &[(0, 1)])]), p(&r, &[(1, &[(1, 1)])])],
        )
        .unwrap();
        assert!(matches!(point_from_ideal(&both, &data), Err(Error::Unsaturated)));
    }

    #[test]
    fn ideal_from_point_and_round_trips() {
        let data = hilbert_scheme_data(1, &q_const(1)).unwrap();
        let r = qring(&["x0", "x1"]);
        let eta = PluckerPoint::new(
            ExteriorVector::basis(FieldKind::Rationals, 2, &[1]).unwrap(),
        )
        .unwrap();
        let pt = SchemePoint::new(eta, &data).unwrap();
        let i = ideal_from_point(&pt, &data, &r).unwrap();
        assert_eq!(i.basis().elems(), &[p(&r, &[(1, &[(1, 1)])])]);

        // round trips on (n=1, Q=2)
        let data2 = hilbert_scheme_data(1, &q_const(2)).unwrap();
        for coords in [vec![1i64, 0, 0], vec![1, 2, 1], vec![0, 1, 5], vec![3, -1, 7]] {
            let vec2 = ExteriorVector::from_coords(
                FieldKind::Rationals,
                1,
                3,
                coords
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| (vec![k as u32], Scalar::from_int(v)))
                    .collect(),
            )
            .unwrap();
            let pt2 = SchemePoint::new(PluckerPoint::new(vec2).unwrap(), &data2).unwrap();
            let ideal = ideal_from_point(&pt2, &data2, &r).unwrap();
            let back = point_from_ideal(&ideal, &data2).unwrap();
            assert_eq!(back.plucker(), pt2.plucker());
            assert_eq!(
                hilbert_polynomial(&ideal).unwrap(),
                NumericalPolynomial::constant(2)
            );
        }
    }

    #[test]
    fn membership_examples() {
        let data = hilbert_scheme_data(1, &q_const(1)).unwrap();
        let eta = PluckerPoint::new(
            ExteriorVector::basis(FieldKind::Rationals, 2, &[1]).unwrap(),
        )
        .unwrap();
        // degree-1 frame (x0, x1)
        let x1 = vec![Scalar::from_int(0), Scalar::from_int(1)];
        let x0 = vec![Scalar::from_int(1), Scalar::from_int(0)];
        assert!(data.membership_test(&x1, &eta, 1).unwrap());
        assert!(!data.membership_test(&x0, &eta, 1).unwrap());
        // degree-2 frame (x0², x0x1, x1²): x1² is in
        let x1sq = vec![Scalar::from_int(0), Scalar::from_int(0), Scalar::from_int(1)];
        assert!(data.membership_test(&x1sq, &eta, 2).unwrap());
        let x0sq = vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0)];
        assert!(!data.membership_test(&x0sq, &eta, 2).unwrap());
        // tuple length is validated
        assert!(data.membership_test(&x0, &eta, 2).is_err());
    }

    #[test]
    fn membership_agrees_with_ideal_membership() {
        let data = hilbert_scheme_data(1, &q_const(2)).unwrap();
        let r = qring(&["x0", "x1"]);
        let vec2 = ExteriorVector::from_coords(
            FieldKind::Rationals,
            1,
            3,
            vec![
                (vec![0], Scalar::from_int(1)),
                (vec![1], Scalar::from_int(-3)),
                (vec![2], Scalar::from_int(2)),
            ],
        )
        .unwrap();
        let pt = SchemePoint::new(PluckerPoint::new(vec2).unwrap(), &data).unwrap();
        let ideal = ideal_from_point(&pt, &data, &r).unwrap();
        let x_vars = [0u32, 1];
        for d in 1..=4u32 {
            let frame = monomials_of_degree(&x_vars, d, r.order());
            // test a handful of forms per degree
            for pick in 0..frame.len() {
                let mut c = vec![Scalar::from_int(0); frame.len()];
                c[pick] = Scalar::from_int(1);
                if pick + 1 < frame.len() {
                    c[pick + 1] = Scalar::from_int(-2);
                }
                let form = Polynomial::from_terms(
                    r.clone(),
                    frame
                        .iter()
                        .zip(&c)
                        .map(|(m, s)| (m.clone(), s.clone()))
                        .collect(),
                );
                assert_eq!(
                    data.membership_test(&c, pt.plucker(), d).unwrap(),
                    ideal.contains(&form),
                    "degree {d} pick {pick}"
                );
            }
        }
    }

    #[test]
    fn sd_equations_for_the_line() {
        let data = hilbert_scheme_data(1, &q_const(1)).unwrap();
        // degree 1: membership of c0·x0 + c1·x1 in the ideal of η means
        // the form is proportional to the slice generator
        let eqs = data.sd_equations(1).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(format!("{}", eqs[0]), "c1*h0 - c0*h1");
    }

    #[test]
    fn degenerate_full_slice() {
        // Q(t) = t + 1 on the line: only the zero ideal qualifies
        let q = NumericalPolynomial::from_i64_coords(&[0, 1]);
        let data = hilbert_scheme_data(1, &q).unwrap();
        assert_eq!(data.n0(), 0);
        assert!(data.s_template().is_empty());
        let r = qring(&["x0", "x1"]);
        let zero = Ideal::zero(r.clone());
        let pt = point_from_ideal(&zero, &data).unwrap();
        let back = ideal_from_point(&pt, &data, &r).unwrap();
        assert!(back.is_zero_ideal());
    }

    #[test]
    fn off_scheme_rejection() {
        let data = hilbert_scheme_data(2, &q_const(1)).unwrap();
        let f = FieldKind::Rationals;
        // wrong ambient shape
        let wrong = PluckerPoint::new(ExteriorVector::basis(f.clone(), 2, &[0]).unwrap()).unwrap();
        assert!(matches!(data.on_scheme(&wrong), Err(Error::OutsideUniverse(_))));
        // a genuine pencil of lines is accepted
        let ok = PluckerPoint::new(ExteriorVector::basis(f, 3, &[0, 1]).unwrap()).unwrap();
        assert!(SchemePoint::new(ok, &data).is_ok());
    }

    #[test]
    fn line_plus_point_on_grassmannian_of_planes() {
        // Q(t) = t + 2 on the projective plane: a line plus one point.
        // Here d0 = 2, N0 = 2, and the ambient space Gr_2(F^6) has
        // nontrivial Grassmann relations.
        let q = NumericalPolynomial::from_i64_coords(&[1, 1]);
        let data = hilbert_scheme_data(2, &q).unwrap();
        assert_eq!((data.d0(), data.n0(), data.ambient()), (2, 2, (2, 6)));
        assert!(!data.grassmann_relations().is_empty());

        let f = FieldKind::Rationals;
        // a non-decomposable point fails the scheme membership
        let bad = PluckerPoint::new(
            ExteriorVector::from_coords(
                f.clone(),
                2,
                6,
                vec![(vec![0, 1], Scalar::from_int(1)), (vec![2, 3], Scalar::from_int(1))],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(!data.on_scheme(&bad).unwrap());

        // the union of the line x2 = 0 and the point (0:0:1)
        let r = qring(&["x0", "x1", "x2"]);
        let i = Ideal::new(
            r.clone(),
            vec![p(&r, &[(1, &[(0, 1), (2, 1)])]), p(&r, &[(1, &[(1, 1), (2, 1)])])],
        )
        .unwrap();
        let pt = point_from_ideal(&i, &data).unwrap();
        let back = ideal_from_point(&pt, &data, &r).unwrap();
        assert!(back.equal(&i).unwrap());
        assert_eq!(hilbert_polynomial(&back).unwrap(), q);
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = hilbert_scheme_data(2, &q_const(1)).unwrap().serialize();
        let b = hilbert_scheme_data(2, &q_const(1)).unwrap().serialize();
        assert_eq!(a, b);
        assert!(a.contains("d0 1"));
        assert!(a.contains("N0 2"));
    }
}
