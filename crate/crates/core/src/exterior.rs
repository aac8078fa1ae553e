//! Exterior algebra over a field: wedge products, Plücker coordinates,
//! the contraction pairing, Grassmannian quadratic relations, and
//! recovery of a subspace from its Plücker point.
//!
//! Grade-`r` multivectors on `F^s` are stored sparsely on strictly
//! increasing `r`-element index subsets of `{0, …, s−1}`, kept in
//! lexicographic subset order.  The contraction convention is
//! `e_S* ⌐ e_T = sign · e_{T∖S}` when `S ⊆ T` (zero otherwise), where the
//! sign is that of the permutation sorting `S` followed by `T∖S`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::matrix::{same_row_space, Matrix};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// All strictly increasing `r`-subsets of `{0, …, s−1}` in lexicographic
/// order.
pub fn index_subsets(r: u32, s: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, s: u32, r: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..=s.saturating_sub(r) {
            acc.push(i);
            rec(i + 1, s, r - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if r <= s {
        rec(0, s, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Merges two disjoint sorted index lists, returning the sorted union and
/// the sign of the interleaving permutation; `None` when they intersect.
fn merge_sign(a: &[u32], b: &[u32]) -> Option<(Vec<u32>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut sign = 1;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

/// Contraction on basis elements: `e_S* ⌐ e_T = sign · e_{T∖S}` for
/// `S ⊆ T`, `None` otherwise.
fn contract_subsets(s_star: &[u32], t: &[u32]) -> Option<(Vec<u32>, i32)> {
    let mut rest: Vec<u32> = Vec::with_capacity(t.len());
    let mut it = s_star.iter().peekable();
    for &x in t {
        if it.peek() == Some(&&x) {
            it.next();
        } else {
            rest.push(x);
        }
    }
    if it.peek().is_some() || rest.len() + s_star.len() != t.len() {
        return None;
    }
    // sign of sorting S ++ rest, both halves already sorted
    let mut sign = 1;
    for &s in s_star {
        let inversions = rest.iter().filter(|&&d| d < s).count();
        if inversions % 2 == 1 {
            sign = -sign;
        }
    }
    Some((rest, sign))
}

/// A grade-`r` element of the exterior algebra of `F^s`, sparse on
/// increasing index subsets; zero coordinates are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorVector {
    field: FieldKind,
    grade: u32,
    dim: u32,
    coords: Vec<(Vec<u32>, Scalar)>,
}

impl ExteriorVector {
    pub fn zero(field: FieldKind, grade: u32, dim: u32) -> Self {
        ExteriorVector { field, grade, dim, coords: Vec::new() }
    }

    /// Builds a multivector from `(subset, coordinate)` pairs; subsets must
    /// be strictly increasing with entries below `dim`.
    pub fn from_coords(
        field: FieldKind,
        grade: u32,
        dim: u32,
        coords: Vec<(Vec<u32>, Scalar)>,
    ) -> Result<Self> {
        let mut clean: Vec<(Vec<u32>, Scalar)> = Vec::new();
        for (subset, c) in coords {
            if subset.len() != grade as usize {
                return Err(Error::GradeMismatch(format!(
                    "subset {subset:?} does not have {grade} elements"
                )));
            }
            if !subset.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::IndexMismatch(format!(
                    "subset {subset:?} is not strictly increasing"
                )));
            }
            if subset.iter().any(|&i| i >= dim) {
                return Err(Error::IndexMismatch(format!(
                    "subset {subset:?} exceeds dimension {dim}"
                )));
            }
            if c.is_zero() {
                continue;
            }
            match clean.binary_search_by(|(t, _)| t.cmp(&subset)) {
                Ok(pos) => {
                    let sum = clean[pos].1.add(&c);
                    if sum.is_zero() {
                        clean.remove(pos);
                    } else {
                        clean[pos].1 = sum;
                    }
                }
                Err(pos) => clean.insert(pos, (subset, c)),
            }
        }
        Ok(ExteriorVector { field, grade, dim, coords: clean })
    }

    /// A single-subset basis multivector `e_T`.
    pub fn basis(field: FieldKind, dim: u32, subset: &[u32]) -> Result<Self> {
        let one = field.one();
        ExteriorVector::from_coords(field, subset.len() as u32, dim, vec![(subset.to_vec(), one)])
    }

    /// Embeds an ordinary vector of `F^s` as a grade-1 multivector.
    pub fn from_vector(field: FieldKind, v: &[Scalar]) -> Self {
        let coords = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32], c.clone()))
            .collect();
        ExteriorVector { field, grade: 1, dim: v.len() as u32, coords }
    }

    pub fn field(&self) -> &FieldKind {
        &self.field
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn coords(&self) -> &[(Vec<u32>, Scalar)] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, subset: &[u32]) -> Scalar {
        self.coords
            .iter()
            .find(|(t, _)| t.as_slice() == subset)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return ExteriorVector::zero(self.field.clone(), self.grade, self.dim);
        }
        let coords = self.coords.iter().map(|(t, a)| (t.clone(), a.mul(c))).collect();
        ExteriorVector { field: self.field.clone(), grade: self.grade, dim: self.dim, coords }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grade != other.grade || self.dim != other.dim {
            return Err(Error::GradeMismatch("sum of multivectors of different shape".into()));
        }
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        ExteriorVector::from_coords(self.field.clone(), self.grade, self.dim, coords)
    }

    /// Wedge product; grades add.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("wedge of multivectors over different spaces".into()));
        }
        let grade = self.grade + other.grade;
        let mut coords: Vec<(Vec<u32>, Scalar)> = Vec::new();
        for (s, a) in &self.coords {
            for (t, b) in &other.coords {
                if let Some((u, sign)) = merge_sign(s, t) {
                    let mut c = a.mul(b);
                    if sign < 0 {
                        c = c.neg();
                    }
                    coords.push((u, c));
                }
            }
        }
        ExteriorVector::from_coords(self.field.clone(), grade, self.dim, coords)
    }

    /// Contraction by a grade-`g` basis covector `e_S*`, for any `g` up to
    /// the grade; the result has grade `grade − g`.
    pub fn contract(&self, s_star: &[u32]) -> Result<Self> {
        if s_star.len() > self.grade as usize {
            return Err(Error::GradeMismatch(format!(
                "covector grade {} exceeds multivector grade {}",
                s_star.len(),
                self.grade
            )));
        }
        if !s_star.windows(2).all(|w| w[0] < w[1]) || s_star.iter().any(|&i| i >= self.dim) {
            return Err(Error::IndexMismatch(format!("bad covector subset {s_star:?}")));
        }
        let mut coords = Vec::new();
        for (t, c) in &self.coords {
            if let Some((rest, sign)) = contract_subsets(s_star, t) {
                let v = if sign < 0 { c.neg() } else { c.clone() };
                coords.push((rest, v));
            }
        }
        ExteriorVector::from_coords(
            self.field.clone(),
            self.grade - s_star.len() as u32,
            self.dim,
            coords,
        )
    }
}

impl fmt::Display for ExteriorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let name: Vec<String> = t.iter().map(|i| i.to_string()).collect();
            write!(f, "({c})*e{}", name.join("_"))?;
        }
        Ok(())
    }
}

/// Contraction `e_S* ⌐ η` for a grade `|S| = r−1` covector, returned as an
/// ordinary vector of `F^s`.
pub fn contraction(s_star: &[u32], eta: &ExteriorVector) -> Result<Vec<Scalar>> {
    if s_star.len() + 1 != eta.grade() as usize {
        return Err(Error::GradeMismatch(format!(
            "covector grade {} must be one below multivector grade {}",
            s_star.len(),
            eta.grade()
        )));
    }
    let down = eta.contract(s_star)?;
    let mut v = vec![eta.field().zero(); eta.dim() as usize];
    for (t, c) in down.coords() {
        v[t[0] as usize] = c.clone();
    }
    Ok(v)
}

/// A Plücker point: a nonzero multivector normalized so that its first
/// nonzero coordinate (lexicographic subset order) is 1.  Projective
/// equality becomes literal equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerPoint {
    vec: ExteriorVector,
}

impl PluckerPoint {
    pub fn new(vec: ExteriorVector) -> Result<Self> {
        if vec.is_zero() {
            return Err(Error::DependentVectors);
        }
        let lead = vec.coords()[0].1.clone();
        let inv = lead.inv().expect("leading coordinate is nonzero");
        Ok(PluckerPoint { vec: vec.scale(&inv) })
    }

    pub fn multivector(&self) -> &ExteriorVector {
        &self.vec
    }

    pub fn grade(&self) -> u32 {
        self.vec.grade()
    }

    pub fn dim(&self) -> u32 {
        self.vec.dim()
    }
}

impl fmt::Display for PluckerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vec)
    }
}

/// Plücker coordinates of the span of `basis`: the normalized wedge of the
/// rows.  Errors when the rows are linearly dependent.
pub fn plucker_coordinates(field: &FieldKind, basis: &[Vec<Scalar>]) -> Result<PluckerPoint> {
    if basis.is_empty() {
        return Err(Error::DimensionMismatch("empty basis".into()));
    }
    let s = basis[0].len();
    if basis.iter().any(|v| v.len() != s) {
        return Err(Error::DimensionMismatch("rows of unequal length".into()));
    }
    let mut acc = ExteriorVector::from_vector(field.clone(), &basis[0]);
    for v in &basis[1..] {
        acc = acc.wedge(&ExteriorVector::from_vector(field.clone(), v))?;
    }
    PluckerPoint::new(acc)
}

/// Whether `η` satisfies every Grassmann relation `η ∧ (e_S* ⌐ η) = 0`.
pub fn is_decomposable(eta: &ExteriorVector) -> bool {
    if eta.grade() == 0 || eta.grade() >= eta.dim() {
        return true;
    }
    for s_star in index_subsets(eta.grade() - 1, eta.dim()) {
        let v = eta.contract(&s_star).expect("valid covector");
        let wedge = v.wedge(eta).expect("same space");
        if !wedge.is_zero() {
            return false;
        }
    }
    true
}

/// Deterministic variable names for the Plücker coordinates of grade-`r`
/// subspaces of `F^s`: one variable per increasing `r`-subset, in
/// lexicographic order.
pub fn plucker_variable_names(r: u32, s: u32) -> Vec<String> {
    index_subsets(r, s)
        .into_iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(|i| i.to_string()).collect();
            if s <= 10 {
                format!("p{}", parts.join(""))
            } else {
                format!("p{}", parts.join("_"))
            }
        })
        .collect()
}

/// The polynomial ring `F[p_T]` on the Plücker coordinates, together with
/// the subset labelling each variable.
pub fn plucker_ring(field: FieldKind, r: u32, s: u32) -> Result<(Arc<Ring>, Vec<Vec<u32>>)> {
    let names = plucker_variable_names(r, s);
    let refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
    let ring = Ring::simple(field, &refs)?;
    Ok((ring, index_subsets(r, s)))
}

/// The quadratic forms obtained by expanding `η ∧ (e_S* ⌐ η)` symbolically
/// over all grade-`r−1` covectors `e_S*` and collecting the coefficient of
/// each grade-`r+1` basis element.  Identically zero forms are dropped, so
/// grade 1 (or `r = s`) yields an empty list.
pub fn grassmann_equations(field: FieldKind, r: u32, s: u32) -> Result<Vec<Polynomial>> {
    if r > s {
        return Err(Error::GradeMismatch(format!("grade {r} exceeds dimension {s}")));
    }
    let (ring, subsets) = plucker_ring(field, r, s)?;
    if r == 0 || r == s {
        return Ok(Vec::new());
    }
    let var_of = |t: &[u32]| -> usize {
        subsets.iter().position(|u| u.as_slice() == t).expect("subset indexes a variable")
    };
    let mut out: Vec<Polynomial> = Vec::new();
    for s_star in index_subsets(r - 1, s) {
        // collect the coefficient of each grade-(r+1) subset W in η∧(e_S*⌐η)
        let mut forms: std::collections::BTreeMap<Vec<u32>, Polynomial> =
            std::collections::BTreeMap::new();
        for t in &subsets {
            let Some((rest, csign)) = contract_subsets(&s_star, t) else { continue };
            let j = rest[0];
            for u in &subsets {
                let Some((w, wsign)) = merge_sign(&[j], u) else { continue };
                let sign = csign * wsign;
                let mut q = Polynomial::var(ring.clone(), var_of(t) as u32)
                    .mul(&Polynomial::var(ring.clone(), var_of(u) as u32));
                if sign < 0 {
                    q = q.neg();
                }
                let entry = forms.entry(w).or_insert_with(|| Polynomial::zero(ring.clone()));
                *entry = entry.add(&q);
            }
        }
        for (_, form) in forms {
            if !form.is_zero() {
                out.push(form);
            }
        }
    }
    Ok(out)
}

/// Recovers a row basis of the `r`-dimensional subspace with Plücker point
/// `η`, as the span of all contractions `e_S* ⌐ η`.  Errors when `η` fails
/// a Grassmann relation.
pub fn subspace_from_plucker(eta: &PluckerPoint) -> Result<Vec<Vec<Scalar>>> {
    if !is_decomposable(eta.multivector()) {
        return Err(Error::NotDecomposable);
    }
    let field = eta.multivector().field().clone();
    let r = eta.grade();
    let s = eta.dim();
    let mut rows = Vec::new();
    for s_star in index_subsets(r - 1, s) {
        let v = contraction(&s_star, eta.multivector())?;
        if v.iter().any(|c| !c.is_zero()) {
            rows.push(v);
        }
    }
    let mat = Matrix::from_rows(field, rows)?;
    let basis = mat.rref_rows();
    if basis.len() != r as usize {
        return Err(Error::NotDecomposable);
    }
    Ok(basis)
}

/// Second recovery route: the solution space of `v ∧ η = 0`.  Used to
/// cross-check `subspace_from_plucker`.
pub fn subspace_from_wedge_kernel(eta: &PluckerPoint) -> Result<Vec<Vec<Scalar>>> {
    let field = eta.multivector().field().clone();
    let s = eta.dim();
    let r = eta.grade();
    let targets = index_subsets(r + 1, s);
    let mut rows = Vec::with_capacity(targets.len());
    for w in &targets {
        let mut row = Vec::with_capacity(s as usize);
        for i in 0..s {
            let ei = ExteriorVector::basis(field.clone(), s, &[i])?;
            let wedge = ei.wedge(eta.multivector())?;
            row.push(wedge.coord(w));
        }
        rows.push(row);
    }
    let mat = Matrix::from_rows(field.clone(), rows)?;
    let kernel = mat.kernel_basis();
    let basis = Matrix::from_rows(field, kernel)?.rref_rows();
    Ok(basis)
}

/// Membership test `v ∈ V` via `v ∧ pk(V) = 0`.
pub fn vector_in_subspace(v: &[Scalar], eta: &PluckerPoint) -> Result<bool> {
    let g1 = ExteriorVector::from_vector(eta.multivector().field().clone(), v);
    Ok(g1.wedge(eta.multivector())?.is_zero())
}

/// True when two row families span the same subspace.
pub fn same_span(field: &FieldKind, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<bool> {
    same_row_space(field, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn qvec(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn plucker_examples() {
        let f = FieldKind::Rationals;
        let pk = plucker_coordinates(&f, &[qvec(&[1, 0, 0]), qvec(&[0, 1, 0])]).unwrap();
        assert_eq!(pk.multivector().coords(), &[(vec![0, 1], q(1))]);

        let line = plucker_coordinates(&f, &[qvec(&[1, 2, 3])]).unwrap();
        assert_eq!(
            line.multivector().coords(),
            &[(vec![0], q(1)), (vec![1], q(2)), (vec![2], q(3))]
        );

        // two bases of one plane agree after normalization
        let b2 = plucker_coordinates(&f, &[qvec(&[1, 2, 0]), qvec(&[3, 4, 0])]).unwrap();
        assert_eq!(pk, b2);

        // dependent rows are rejected
        assert!(matches!(
            plucker_coordinates(&f, &[qvec(&[1, 2, 3]), qvec(&[2, 4, 6])]),
            Err(Error::DependentVectors)
        ));
    }

    #[test]
    fn contraction_signs() {
        let f = FieldKind::Rationals;
        let e01 = ExteriorVector::basis(f.clone(), 3, &[0, 1]).unwrap();
        assert_eq!(contraction(&[0], &e01).unwrap(), qvec(&[0, 1, 0]));
        assert_eq!(contraction(&[1], &e01).unwrap(), qvec(&[-1, 0, 0]));
        assert_eq!(contraction(&[2], &e01).unwrap(), qvec(&[0, 0, 0]));
        // grade mismatch is rejected
        assert!(contraction(&[0, 1], &e01).is_err());
    }

    #[test]
    fn wedge_antisymmetry_and_bilinearity() {
        let f = FieldKind::Rationals;
        let a = ExteriorVector::from_vector(f.clone(), &qvec(&[1, 2, 0, -1]));
        let b = ExteriorVector::from_vector(f.clone(), &qvec(&[0, 3, 5, 7]));
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        assert_eq!(ab, ba.scale(&q(-1)));
        assert!(a.wedge(&a).unwrap().is_zero());
        let c = ExteriorVector::from_vector(f.clone(), &qvec(&[2, 0, 1, 1]));
        let lhs = a.add(&c).unwrap().wedge(&b).unwrap();
        let rhs = ab.add(&c.wedge(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grassmann_relations() {
        let f = FieldKind::Rationals;
        // grade 1: every vector is decomposable, no relations
        assert!(grassmann_equations(f.clone(), 1, 4).unwrap().is_empty());
        // (2,3): the expansion is identically zero
        assert!(grassmann_equations(f.clone(), 2, 3).unwrap().is_empty());
        // (2,4): exactly the classical three-term relation, up to sign/repeats
        let eqs = grassmann_equations(f.clone(), 2, 4).unwrap();
        assert!(!eqs.is_empty());
        let mut distinct: Vec<Polynomial> = eqs.iter().map(|e| e.monic()).collect();
        distinct.sort_by(|a, b| format!("{a}").cmp(&format!("{b}")));
        distinct.dedup();
        assert_eq!(distinct.len(), 1);
        assert_eq!(format!("{}", distinct[0]), "p03*p12 - p02*p13 + p01*p23");
        assert!(grassmann_equations(f, 3, 2).is_err());
    }

    #[test]
    fn subspace_recovery_round_trip() {
        let f = FieldKind::Rationals;
        let pk = plucker_coordinates(&f, &[qvec(&[1, 0, 0]), qvec(&[0, 1, 0])]).unwrap();
        let basis = subspace_from_plucker(&pk).unwrap();
        assert!(same_span(&f, &basis, &[qvec(&[1, 0, 0]), qvec(&[0, 1, 0])]).unwrap());

        // a random-looking plane in F^4 round-trips
        let rows = vec![qvec(&[1, 2, 3, 4]), qvec(&[0, 1, -1, 2])];
        let pk2 = plucker_coordinates(&f, &rows).unwrap();
        let rec = subspace_from_plucker(&pk2).unwrap();
        assert!(same_span(&f, &rec, &rows).unwrap());
        let again = plucker_coordinates(&f, &rec).unwrap();
        assert_eq!(again, pk2);
        // both recovery paths agree
        let alt = subspace_from_wedge_kernel(&pk2).unwrap();
        assert!(same_span(&f, &rec, &alt).unwrap());

        // e0∧e1 + e2∧e3 fails the quadratic relation
        let bad = ExteriorVector::from_coords(
            f.clone(),
            2,
            4,
            vec![(vec![0, 1], q(1)), (vec![2, 3], q(1))],
        )
        .unwrap();
        assert!(!is_decomposable(&bad));
        let bad_pt = PluckerPoint::new(bad).unwrap();
        assert!(matches!(subspace_from_plucker(&bad_pt), Err(Error::NotDecomposable)));
    }

    #[test]
    fn membership_via_wedge() {
        let f = FieldKind::Rationals;
        let rows = vec![qvec(&[1, 2, 3, 4]), qvec(&[0, 1, -1, 2])];
        let pk = plucker_coordinates(&f, &rows).unwrap();
        // a combination of the rows lies in the plane
        assert!(vector_in_subspace(&qvec(&[2, 5, 5, 10]), &pk).unwrap());
        assert!(!vector_in_subspace(&qvec(&[1, 0, 0, 0]), &pk).unwrap());
    }
}
