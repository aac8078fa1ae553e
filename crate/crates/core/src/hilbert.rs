//! Graded slices of homogeneous ideals, Hilbert polynomials, saturation,
//! and the Macaulay/Gotzmann degree bound.
//!
//! A homogeneous ideal `J` in `n+1` variables occupies, in each degree `d`,
//! a subspace `J_d` of the degree-`d` monomial span.  This module computes
//! those slices by plain row reduction of generator multiples (no Gröbner
//! machinery on that path, so it doubles as an independent cross-check of
//! basis-driven counts), fits the codimension function to a numerical
//! polynomial once it stabilizes, saturates ideals with respect to the
//! ideal of all variables, and extracts the Gotzmann degree bound from
//! the greedy binomial representation of a Hilbert polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::groebner::Ideal;
use crate::matrix::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::numpoly::{binomial, NumericalPolynomial};
use crate::poly::Polynomial;

/// Default highest window start tried while fitting a Hilbert polynomial.
pub const DEFAULT_STABILIZATION_CAP: u32 = 60;

/// One degree-`d` slice of a homogeneous ideal: a reduced-row-echelon
/// basis of `J_d` expressed over the degree-`d` monomials (in descending
/// ring order).
#[derive(Debug, Clone)]
pub struct GradedPiece {
    degree: u32,
    monomials: Vec<Monomial>,
    basis: Matrix,
}

impl GradedPiece {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The degree-`d` monomial frame the rows are written in.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Reduced-row-echelon basis of the slice; row count is its dimension.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Membership of a homogeneous polynomial of matching degree in the
    /// slice's row space.
    pub fn contains(&self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        let row = coeff_row(f, &self.monomials);
        let mut rows = self.basis.rref_rows();
        let before = rows.len();
        rows.push(row);
        Matrix::from_rows(self.basis.field().clone(), rows)
            .map(|m| m.rank() == before)
            .unwrap_or(false)
    }
}

fn ensure_homogeneous(j: &Ideal) -> Result<()> {
    let all: Vec<u32> = (0..j.ring().num_vars() as u32).collect();
    for g in j.gens() {
        if g.homogeneous_degree(&all).is_none() {
            return Err(Error::NotHomogeneous("ideal generators must be homogeneous".into()));
        }
    }
    Ok(())
}

fn coeff_row(f: &Polynomial, frame: &[Monomial]) -> Vec<Scalar> {
    let field = f.ring().field().clone();
    let mut row = vec![field.zero(); frame.len()];
    for (m, c) in f.terms() {
        let pos = frame.iter().position(|x| x == m).expect("degree frame covers the term");
        row[pos] = c.clone();
    }
    row
}

/// The reduced-row-echelon slice `J_d`, spanned by all monomial multiples
/// `m·g` of the generators with `deg(m·g) = d`.
pub fn graded_piece(j: &Ideal, d: u32) -> Result<GradedPiece> {
    ensure_homogeneous(j)?;
    let ring = j.ring();
    let all: Vec<u32> = (0..ring.num_vars() as u32).collect();
    let frame = monomials_of_degree(&all, d, ring.order());
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in j.gens() {
        let e = g.total_deg().expect("nonzero generator");
        if e > d {
            continue;
        }
        for m in monomials_of_degree(&all, d - e, ring.order()) {
            rows.push(coeff_row(&g.mul_monomial(&m), &frame));
        }
    }
    let mut mat = Matrix::from_rows(ring.field().clone(), rows).unwrap_or_else(|_| {
        Matrix::zero(ring.field().clone(), 0, frame.len())
    });
    if mat.rows() == 0 {
        mat = Matrix::zero(ring.field().clone(), 0, frame.len());
    }
    let basis_rows = mat.rref_rows();
    let basis = if basis_rows.is_empty() {
        Matrix::zero(ring.field().clone(), 0, frame.len())
    } else {
        Matrix::from_rows(ring.field().clone(), basis_rows)?
    };
    Ok(GradedPiece { degree: d, monomials: frame, basis })
}

/// Dimension of the degree-`d` slice `J_d`, by row reduction.
pub fn graded_dimension(j: &Ideal, d: u32) -> Result<usize> {
    Ok(graded_piece(j, d)?.dim())
}

/// Dimension of the degree-`d` slice counted from the reduced basis
/// instead: monomials of degree `d` divisible by some leading monomial.
/// Provides a second, independent route to the same number.
pub fn graded_dimension_from_basis(j: &Ideal, d: u32) -> Result<usize> {
    ensure_homogeneous(j)?;
    let ring = j.ring();
    let all: Vec<u32> = (0..ring.num_vars() as u32).collect();
    let leads: Vec<Monomial> = j
        .basis()
        .elems()
        .iter()
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    Ok(monomials_of_degree(&all, d, ring.order())
        .into_iter()
        .filter(|m| leads.iter().any(|l| l.divides(m)))
        .count())
}

/// Codimension of `J_d` inside the full degree-`d` span.
pub fn graded_codimension(j: &Ideal, d: u32) -> Result<BigInt> {
    let nvars = j.ring().num_vars() as u32;
    let full = binomial(&BigInt::from(d + nvars - 1), nvars - 1);
    Ok(full - BigInt::from(graded_dimension(j, d)? as u64))
}

/// A Hilbert polynomial together with the degree from which it was
/// verified to match the codimension function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProfile {
    pub stabilization_degree: u32,
    pub polynomial: NumericalPolynomial,
}

/// Fits the codimension function `d ↦ codim J_d` to a numerical
/// polynomial.  The window starts at the largest generator degree; a fit
/// on `#vars` consecutive values must then be confirmed on the next
/// `#vars` degrees, otherwise the window slides forward, up to `cap`.
pub fn hilbert_polynomial_capped(j: &Ideal, cap: u32) -> Result<HilbertProfile> {
    ensure_homogeneous(j)?;
    let nvars = j.ring().num_vars() as u32;
    let start = j.gens().iter().filter_map(|g| g.total_deg()).max().unwrap_or(0);
    let points = nvars; // a numerical polynomial of degree ≤ nvars−1 needs that many values
    let mut values: Vec<BigInt> = Vec::new();
    let value = |values: &mut Vec<BigInt>, d: u32| -> Result<BigInt> {
        while values.len() <= d as usize {
            let dd = values.len() as u32;
            values.push(graded_codimension(j, dd)?);
        }
        Ok(values[d as usize].clone())
    };

    let mut d_star = start;
    loop {
        if d_star > cap {
            return Err(Error::StabilizationCap(cap));
        }
        let mut window = Vec::with_capacity(points as usize);
        for d in d_star..d_star + points {
            window.push((d, value(&mut values, d)?));
        }
        if let Some(q) = fit_numerical(&window) {
            let mut ok = true;
            for d in d_star + points..d_star + 2 * points {
                if q.eval_i64(d as i64) != value(&mut values, d)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(HilbertProfile { stabilization_degree: d_star, polynomial: q });
            }
        }
        d_star += 1;
    }
}

pub fn hilbert_polynomial(j: &Ideal) -> Result<NumericalPolynomial> {
    Ok(hilbert_polynomial_capped(j, DEFAULT_STABILIZATION_CAP)?.polynomial)
}

/// Interpolates the given `(degree, value)` points by a numerical
/// polynomial in binomial coordinates; `None` when the exact solve has no
/// integer solution.
fn fit_numerical(points: &[(u32, BigInt)]) -> Option<NumericalPolynomial> {
    let k = points.len();
    let field = crate::field::FieldKind::Rationals;
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (d, v) in points {
        let mut row = Vec::with_capacity(k);
        for i in 0..k as u32 {
            let c = binomial(&BigInt::from(*d + i), i);
            row.push(Scalar::Rat(BigRational::from_integer(c)));
        }
        rows.push(row);
        rhs.push(Scalar::Rat(BigRational::from_integer(v.clone())));
    }
    let mat = Matrix::from_rows(field, rows).ok()?;
    let sol = mat.solve(&rhs).ok()??;
    let mut coords = Vec::with_capacity(k);
    for s in sol {
        let r = s.as_rational()?;
        if !r.is_integer() {
            return None;
        }
        coords.push(r.to_integer());
    }
    Some(NumericalPolynomial::new(coords))
}

/// Saturation of a homogeneous ideal with respect to the ideal of all
/// variables: the largest homogeneous ideal agreeing with `J` in all
/// sufficiently high degrees.  Computed as the intersection of the
/// saturations by each variable.
pub fn saturate(j: &Ideal) -> Result<Ideal> {
    let all: Vec<u32> = (0..j.ring().num_vars() as u32).collect();
    saturate_over(j, &all)
}

/// Saturation with respect to the ideal of the listed variables.
pub fn saturate_over(j: &Ideal, vars: &[u32]) -> Result<Ideal> {
    ensure_homogeneous(j)?;
    let ring = j.ring().clone();
    let mut acc: Option<Ideal> = None;
    for &v in vars {
        let x = Polynomial::var(ring.clone(), v);
        let s = j.saturate_poly(&x)?;
        acc = Some(match acc {
            None => s,
            Some(a) => a.intersect(&s)?,
        });
    }
    acc.ok_or_else(|| Error::Invalid("saturation needs at least one variable".into()))
}

/// Whether `J` equals its saturation.
pub fn is_saturated(j: &Ideal) -> Result<bool> {
    saturate(j)?.equal(j)
}

/// Equality test for saturated ideals via reduced-basis equality.
/// Rejects unsaturated input: equality of saturated ideals is exactly
/// agreement in all large degrees, which is what callers rely on.
pub fn saturated_equal(i: &Ideal, j: &Ideal) -> Result<bool> {
    if !is_saturated(i)? || !is_saturated(j)? {
        return Err(Error::Unsaturated);
    }
    i.equal(j)
}

/// Iteration guard for the greedy binomial expansion.
const GOTZMANN_TERM_CAP: usize = 100_000;

/// The Gotzmann number of a Hilbert polynomial: the number of terms of its
/// greedy binomial representation
/// `Q(t) = C(t+a1, a1) + C(t+a2−1, a2) + … + C(t+ar−(r−1), ar)` with
/// `a1 ≥ a2 ≥ … ≥ ar ≥ 0`.  Errors when no such representation exists
/// (then `Q` is not the Hilbert polynomial of any homogeneous ideal).
pub fn gotzmann_number(q: &NumericalPolynomial) -> Result<u32> {
    let mut rest = q.clone();
    let mut prev_a: Option<u32> = None;
    let mut count: u32 = 0;
    while !rest.is_zero() {
        if count as usize >= GOTZMANN_TERM_CAP {
            return Err(Error::NoBinomialRepresentation("expansion did not terminate".into()));
        }
        let a = rest.degree().expect("nonzero");
        if rest.leading().map(|c| c.is_negative()).unwrap_or(false) {
            return Err(Error::NoBinomialRepresentation("negative leading coefficient".into()));
        }
        if let Some(p) = prev_a {
            if a > p {
                return Err(Error::NoBinomialRepresentation("term degrees must not increase".into()));
            }
        }
        let term = NumericalPolynomial::shifted_binomial(a, count);
        rest = rest.sub(&term);
        prev_a = Some(a);
        count += 1;
    }
    Ok(count)
}

/// The degree-`d` dimension of the full polynomial ring slice in `nvars`
/// variables.
pub fn full_slice_dim(nvars: u32, d: u32) -> BigInt {
    binomial(&BigInt::from(d + nvars - 1), nvars - 1)
}

/// Constructive degree bound past which a monomial ideal generated in
/// degrees ≤ D agrees with its saturation: `(#vars)(D−1) + D`.
pub fn monomial_agreement_bound(nvars: u32, max_gen_degree: u32) -> u32 {
    let d = max_gen_degree.max(1);
    nvars * (d - 1) + d
}

/// The range of degrees `[lo, hi]` for which two homogeneous ideals have
/// identical graded pieces, checked slice by slice.
pub fn slices_agree(i: &Ideal, j: &Ideal, lo: u32, hi: u32) -> Result<bool> {
    for d in lo..=hi {
        let a = graded_piece(i, d)?;
        let b = graded_piece(j, d)?;
        if a.dim() != b.dim() {
            return Ok(false);
        }
        if a.basis().rref_rows() != b.basis().rref_rows() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::FieldKind;
    use crate::ring::Ring;

    fn qring(names: &[&str]) -> Arc<Ring> {
        Ring::simple(FieldKind::Rationals, names).unwrap()
    }

    fn p(ring: &Arc<Ring>, terms: &[(i64, &[(u32, u32)])]) -> Polynomial {
        Polynomial::from_int_terms(ring, terms)
    }

    #[test]
    fn graded_dimension_examples() {
        let r2 = qring(&["x0", "x1"]);
        let zero = Ideal::zero(r2.clone());
        assert_eq!(graded_dimension(&zero, 5).unwrap(), 0);

        let jx = Ideal::new(r2.clone(), vec![p(&r2, &[(1, &[(0, 1)])])]).unwrap();
        assert_eq!(graded_dimension(&jx, 3).unwrap(), 3);

        let r3 = qring(&["x0", "x1", "x2"]);
        let all: Vec<u32> = vec![0, 1, 2];
        let gens: Vec<Polynomial> = monomials_of_degree(&all, 2, r3.order())
            .into_iter()
            .map(|m| Polynomial::monomial(r3.clone(), m, Scalar::from_int(1)))
            .collect();
        let full = Ideal::new(r3.clone(), gens).unwrap();
        assert_eq!(graded_dimension(&full, 2).unwrap(), 6);

        // both counting routes agree
        for d in 0..6 {
            assert_eq!(
                graded_dimension(&jx, d).unwrap(),
                graded_dimension_from_basis(&jx, d).unwrap()
            );
        }
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        let r = qring(&["x0", "x1"]);
        let j = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(0, 2)]), (1, &[(1, 1)])])]).unwrap();
        assert!(matches!(graded_dimension(&j, 2), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn hilbert_polynomial_examples() {
        let r2 = qring(&["x0", "x1"]);
        let j = Ideal::new(r2.clone(), vec![p(&r2, &[(1, &[(1, 1)])])]).unwrap();
        assert_eq!(hilbert_polynomial(&j).unwrap(), NumericalPolynomial::constant(1));

        let zero = Ideal::zero(r2.clone());
        // Q(d) = d + 1 = C(d+1,1)
        assert_eq!(
            hilbert_polynomial(&zero).unwrap(),
            NumericalPolynomial::from_i64_coords(&[0, 1])
        );

        // twisted cubic: 2x2 minors of [[x0,x1,x2],[x1,x2,x3]]; Q(d) = 3d + 1
        let r4 = qring(&["x0", "x1", "x2", "x3"]);
        let tc = Ideal::new(
            r4.clone(),
            vec![
                p(&r4, &[(1, &[(0, 1), (2, 1)]), (-1, &[(1, 2)])]),
                p(&r4, &[(1, &[(0, 1), (3, 1)]), (-1, &[(1, 1), (2, 1)])]),
                p(&r4, &[(1, &[(1, 1), (3, 1)]), (-1, &[(2, 2)])]),
            ],
        )
        .unwrap();
        let q = hilbert_polynomial(&tc).unwrap();
        assert_eq!(q.eval_i64(0), BigInt::from(1));
        assert_eq!(q.eval_i64(1), BigInt::from(4));
        assert_eq!(q.eval_i64(10), BigInt::from(31));
        assert_eq!(q.display_power('d'), "3*d + 1");
    }

    #[test]
    fn saturation_examples() {
        let r = qring(&["x0", "x1"]);
        let x0 = p(&r, &[(1, &[(0, 1)])]);
        let j = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(0, 2)])]), p(&r, &[(1, &[(0, 1), (1, 1)])])])
            .unwrap();
        let s = saturate(&j).unwrap();
        assert_eq!(s.basis().elems(), &[x0.clone()]);

        let px = Ideal::new(r.clone(), vec![x0.clone()]).unwrap();
        assert!(saturate(&px).unwrap().equal(&px).unwrap());

        let m2 = Ideal::new(
            r.clone(),
            vec![
                p(&r, &[(1, &[(0, 2)])]),
                p(&r, &[(1, &[(0, 1), (1, 1)])]),
                p(&r, &[(1, &[(1, 2)])]),
            ],
        )
        .unwrap();
        assert!(saturate(&m2).unwrap().is_unit_ideal());

        // a principal ideal that plain colon-by-product would destroy
        let sq = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(0, 2)])])]).unwrap();
        assert!(saturate(&sq).unwrap().equal(&sq).unwrap());
    }

    #[test]
    fn saturation_preserves_hilbert_polynomial() {
        let r = qring(&["x0", "x1", "x2"]);
        let j = Ideal::new(
            r.clone(),
            vec![
                p(&r, &[(1, &[(0, 2)])]),
                p(&r, &[(1, &[(0, 1), (1, 1)])]),
                p(&r, &[(1, &[(0, 1), (2, 2)])]),
            ],
        )
        .unwrap();
        let s = saturate(&j).unwrap();
        assert_eq!(hilbert_polynomial(&j).unwrap(), hilbert_polynomial(&s).unwrap());
        // extensive and idempotent
        for g in j.gens() {
            assert!(s.contains(g));
        }
        assert!(saturate(&s).unwrap().equal(&s).unwrap());
    }

    #[test]
    fn gotzmann_examples() {
        assert_eq!(gotzmann_number(&NumericalPolynomial::constant(1)).unwrap(), 1);
        assert_eq!(gotzmann_number(&NumericalPolynomial::constant(2)).unwrap(), 2);
        // Q(t) = t + 1 = C(t+1, 1): one term
        assert_eq!(
            gotzmann_number(&NumericalPolynomial::from_i64_coords(&[0, 1])).unwrap(),
            1
        );
        // Q(t) = 3t + 1: C(t+1,1)+C(t,1)+C(t-1,1)+C(t-3,0) → 4 terms
        let q = NumericalPolynomial::from_power_basis(&[
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(3)),
        ])
        .unwrap();
        assert_eq!(gotzmann_number(&q).unwrap(), 4);
        assert_eq!(gotzmann_number(&NumericalPolynomial::zero()).unwrap(), 0);
        // -1 is not a Hilbert polynomial
        assert!(gotzmann_number(&NumericalPolynomial::constant(-1)).is_err());
    }

    #[test]
    fn saturated_equality() {
        let r = qring(&["x0", "x1"]);
        let x0 = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(0, 1)])])]).unwrap();
        let x1 = Ideal::new(r.clone(), vec![p(&r, &[(1, &[(1, 1)])])]).unwrap();
        assert!(saturated_equal(&x0, &x0).unwrap());
        assert!(!saturated_equal(&x0, &x1).unwrap());

        let j = Ideal::new(
            r.clone(),
            vec![p(&r, &[(1, &[(0, 2)])]), p(&r, &[(1, &[(0, 1), (1, 1)])])],
        )
        .unwrap();
        assert!(saturated_equal(&saturate(&j).unwrap(), &x0).unwrap());
        assert!(matches!(saturated_equal(&j, &x0), Err(Error::Unsaturated)));
    }
}
