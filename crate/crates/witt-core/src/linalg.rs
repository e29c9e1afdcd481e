//! Dense exact linear algebra over a finite field: reduced row echelon
//! form, rank, kernels, and canonical graded subspaces.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elt>,
}

impl Matrix {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Elt::default(); rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<Elt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(k, j));
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, prod));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix subtraction".into()));
        }
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.field.sub(self.data[i], other.data[i]);
        }
        Ok(out)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Elt]) -> Result<Vec<Elt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = f.zero();
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc = f.add(acc, f.mul(a, v[c]));
                }
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Stack matrices vertically.
    pub fn vstack(parts: &[Matrix]) -> Result<Matrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("empty stack".into()))?;
        let cols = first.cols;
        if parts.iter().any(|m| m.cols != cols || m.field != first.field) {
            return Err(Error::DimensionMismatch("vstack shape".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        Ok(Matrix {
            field: first.field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // Find a pivot in this column.
            let mut pivot_row = None;
            for r in row..self.rows {
                if !self.get(r, col).is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..self.cols {
                    let a = self.get(row, c);
                    let b = self.get(pr, c);
                    self.set(row, c, b);
                    self.set(pr, c, a);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(row, c);
                self.set(row, c, f.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c);
                    let sub = f.mul(factor, self.get(row, c));
                    self.set(r, c, f.sub(v, sub));
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Canonical basis of the right kernel `{v : M v = 0}`, one row per
    /// basis vector, itself in reduced echelon form.
    pub fn kernel_basis(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let f = &self.field;
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| !pivot_set[c]).collect();
        let mut basis = Matrix::zeros(self.field.clone(), free_cols.len(), self.cols);
        for (k, &fc) in free_cols.iter().enumerate() {
            basis.set(k, fc, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                let v = m.get(r, fc);
                if !v.is_zero() {
                    basis.set(k, pc, f.neg(v));
                }
            }
        }
        // Rows are already independent; canonicalize so pivots increase.
        basis.rref_in_place();
        basis
    }

    /// Rank of the stack of `self` over `extra` minus rank of `self`:
    /// zero exactly when every row of `extra` lies in the row space.
    pub fn row_space_contains(&self, extra: &Matrix) -> Result<bool> {
        let stacked = Matrix::vstack(&[self.clone(), extra.clone()])?;
        Ok(stacked.rank() == self.rank())
    }

    /// One solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Elt]) -> Result<Option<Vec<Elt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("solve rhs length".into()));
        }
        let f = &self.field;
        let mut aug = Matrix::zeros(self.field.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }
}

/// A homogeneous subspace of degree-`d` polynomials in canonical form:
/// the basis matrix over the ascending graded-lex monomial list is in
/// reduced row echelon form, so equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSubspace {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    basis: Matrix,
}

impl GradedSubspace {
    pub fn from_basis_matrix(nvars: usize, degree: u32, mut basis: Matrix) -> Self {
        basis.rref_in_place();
        // Drop zero rows so dim == rows.
        let nonzero: Vec<Vec<Elt>> = (0..basis.rows())
            .filter(|&r| basis.row(r).iter().any(|e| !e.is_zero()))
            .map(|r| basis.row(r).to_vec())
            .collect();
        let basis = Matrix::from_rows(basis.field().clone(), nonzero)
            .unwrap_or_else(|_| Matrix::zeros(basis.field().clone(), 0, 0));
        GradedSubspace {
            nvars,
            degree,
            monomials: monomials_of_degree(nvars, degree),
            basis,
        }
    }

    pub fn full(field: Arc<Field>, nvars: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(nvars, degree);
        let basis = Matrix::identity(field, monomials.len());
        GradedSubspace {
            nvars,
            degree,
            monomials,
            basis,
        }
    }

    pub fn zero(field: Arc<Field>, nvars: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(nvars, degree);
        let ncols = monomials.len();
        GradedSubspace {
            nvars,
            degree,
            monomials,
            basis: Matrix::zeros(field, 0, ncols),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn basis_polynomials(&self) -> Vec<Polynomial> {
        (0..self.basis.rows())
            .map(|r| {
                Polynomial::from_terms(
                    self.basis.field().clone(),
                    self.nvars,
                    self.monomials
                        .iter()
                        .enumerate()
                        .map(|(c, m)| (m.clone(), self.basis.get(r, c))),
                )
            })
            .collect()
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        let v = poly_to_vector(p, &self.monomials)?;
        let row = Matrix::from_rows(self.basis.field().clone(), vec![v])?;
        self.basis.row_space_contains(&row)
    }
}

/// Coefficient vector of `p` over an explicit monomial list.
pub fn poly_to_vector(p: &Polynomial, monomials: &[Monomial]) -> Result<Vec<Elt>> {
    let mut v = vec![Elt::default(); monomials.len()];
    let index: std::collections::HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    for (m, c) in p.terms() {
        match index.get(m) {
            Some(&i) => v[i] = *c,
            None => {
                return Err(Error::DimensionMismatch(format!(
                    "monomial of degree {} outside the target space",
                    m.degree()
                )))
            }
        }
    }
    Ok(v)
}

/// Joint kernel of linear operators on the degree-`d` monomial space,
/// returned as a canonical `GradedSubspace`. Operators are square matrices
/// over the ascending monomial basis; an empty list yields the full space.
pub fn graded_kernel(
    field: Arc<Field>,
    nvars: usize,
    degree: u32,
    operators: &[Matrix],
) -> Result<GradedSubspace> {
    let dim = monomials_of_degree(nvars, degree).len();
    if operators.is_empty() {
        return Ok(GradedSubspace::full(field, nvars, degree));
    }
    for op in operators {
        if op.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} columns, degree-{} space has dimension {}",
                op.cols(),
                degree,
                dim
            )));
        }
    }
    let stacked = Matrix::vstack(operators)?;
    let kernel = stacked.kernel_basis();
    Ok(GradedSubspace::from_basis_matrix(nvars, degree, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::VarScheme;

    fn f2() -> Arc<Field> {
        Field::prime(2).unwrap()
    }

    fn mat(field: Arc<Field>, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
            .collect();
        Matrix::from_rows(field, rows).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let f = Field::prime(5).unwrap();
        let m = mat(f.clone(), &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        // Check M * v = 0 for the kernel vector.
        let v: Vec<Elt> = k.row(0).to_vec();
        assert!(m.apply(&v).unwrap().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn kernel_of_zero_operator_is_full_space() {
        let f = f2();
        let zero = Matrix::zeros(f.clone(), 2, 2);
        let space = graded_kernel(f, 2, 1, &[zero]).unwrap();
        assert_eq!(space.dim(), 2);
    }

    #[test]
    fn kernel_of_substitution_operator() {
        // Derivation x -> y, y -> 0 on degree 1: kernel is span{y}.
        // Ascending monomial order in 2 vars is [x2, x1] (x2 < x1).
        let f = f2();
        // Operator matrix over basis [x2, x1]: D(x2) = 0, D(x1) = x2.
        let mut op = Matrix::zeros(f.clone(), 2, 2);
        let one = f.one();
        op.set(0, 1, one); // coefficient of x2 in D(x1)
        let space = graded_kernel(f.clone(), 2, 1, &[op]).unwrap();
        assert_eq!(space.dim(), 1);
        let basis = space.basis_polynomials();
        assert_eq!(basis[0].format_with(VarScheme::X1), "1*x2");
    }

    #[test]
    fn trivially_intersecting_kernels() {
        let f = f2();
        let one = f.one();
        let mut opx = Matrix::zeros(f.clone(), 2, 2);
        opx.set(0, 0, one); // kills x1 only
        let mut opy = Matrix::zeros(f.clone(), 2, 2);
        opy.set(1, 1, one); // kills x2 only
        let space = graded_kernel(f, 2, 1, &[opx, opy]).unwrap();
        assert_eq!(space.dim(), 0);
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let f = Field::prime(3).unwrap();
        let m = mat(f, &[&[1, 2, 0], &[0, 1, 1]]);
        let s1 = GradedSubspace::from_basis_matrix(3, 1, m);
        let s2 = GradedSubspace::from_basis_matrix(3, 1, s1.basis_matrix().clone());
        assert_eq!(s1, s2);
    }

    #[test]
    fn containment() {
        let f = Field::prime(3).unwrap();
        let m = mat(f.clone(), &[&[1, 0, 1]]);
        let s = GradedSubspace::from_basis_matrix(3, 1, m);
        // Monomials of degree 1 in 3 vars ascend as [x3, x2, x1].
        let inside = Polynomial::parse(f.clone(), 3, VarScheme::X1, "x3 + x1").unwrap();
        let outside = Polynomial::parse(f, 3, VarScheme::X1, "x2").unwrap();
        assert!(s.contains(&inside).unwrap());
        assert!(!s.contains(&outside).unwrap());
    }
}
