//! Dense exact matrices over any supported scalar field.
//!
//! Row reduction is the single linear-algebra primitive the rest of the
//! kernel uses: graded dimensions, Plücker normalization, subspace
//! recovery, rank conditions, and the lambda-coefficient solver all reduce
//! to `rref`.  Pivoting is deterministic (first nonzero entry scanning
//! columns left to right), so reduced forms are canonical.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldKind,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldKind, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: FieldKind, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &FieldKind {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // deterministic pivot: first row with a nonzero entry
            let pivot = (row..self.rows).find(|&r| !self.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv().expect("nonzero pivot");
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&factor.mul(self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// The nonzero rows after reduction, as owned vectors (canonical basis
    /// of the row space).
    pub fn rref_rows(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
    }

    /// A canonical basis of the kernel `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec_ = vec![self.field.zero(); self.cols];
            vec_[free] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                vec_[pc] = m.at(r, free).neg();
            }
            basis.push(vec_);
        }
        basis
    }

    /// Solves `A x = b`; `None` when inconsistent.  With full column rank
    /// the solution is unique.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} entries, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Matrix::zero(self.field.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the augmented column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Ok(Some(x))
    }
}

/// Row-space equality of two row sets over the same field.
pub fn same_row_space(field: &FieldKind, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<bool> {
    let ma = Matrix::from_rows(field.clone(), a.to_vec())?;
    let mb = Matrix::from_rows(field.clone(), b.to_vec())?;
    if a.is_empty() || b.is_empty() {
        return Ok(a.is_empty() && b.is_empty());
    }
    Ok(ma.rref_rows() == mb.rref_rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_and_rank() {
        let m = Matrix::from_rows(
            FieldKind::Rationals,
            vec![
                vec![q(1), q(2), q(3)],
                vec![q(2), q(4), q(6)],
                vec![q(0), q(1), q(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        let rows = m.rref_rows();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], vec![q(1), q(0), q(1)]);
        assert_eq!(rows[1], vec![q(0), q(1), q(1)]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_rows(
            FieldKind::Rationals,
            vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]],
        )
        .unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![q(1), q(-1), q(1)]);
        let sol = m.solve(&[q(3), q(2)]).unwrap().unwrap();
        // particular solution with free column zeroed
        assert_eq!(sol, vec![q(1), q(2), q(0)]);
        // inconsistent system
        let m2 = Matrix::from_rows(
            FieldKind::Rationals,
            vec![vec![q(1), q(1)], vec![q(2), q(2)]],
        )
        .unwrap();
        assert_eq!(m2.solve(&[q(1), q(3)]).unwrap(), None);
    }

    #[test]
    fn prime_field_rank() {
        // singular over GF(5) but not over Q: [[1,2],[3,1]] det = -5
        let k = FieldKind::Prime(5);
        let m = Matrix::from_rows(
            k.clone(),
            vec![
                vec![k.from_i64(1), k.from_i64(2)],
                vec![k.from_i64(3), k.from_i64(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }
}
