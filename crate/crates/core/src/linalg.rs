//! Dense exact linear algebra: reduced row echelon form, kernels, images,
//! solving, and quotient-space data. Everything is a pure function of
//! immutable inputs.

use crate::error::{DgError, Result};
use crate::field::{FieldSpec, Scalar};

/// A dense matrix over a fixed field, row-major storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in &rows {
            if r.len() != ncols {
                return Err(DgError::ShapeMismatch("ragged rows".into()));
            }
            for x in r {
                if !field.admits(x) {
                    return Err(DgError::ShapeMismatch("scalar kind mismatch".into()));
                }
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Convenience constructor from integer entries.
    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows
            .iter()
            .map(|row| row.iter().map(|&n| field.from_i64(n)).collect())
            .collect();
        Matrix::from_rows(field, r).expect("rectangular integer data")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(self.field.admits(&v));
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(DgError::ShapeMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(DgError::ShapeMismatch(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(r, c), &f.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(DgError::ShapeMismatch(format!(
                "apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if f.is_zero(a) || f.is_zero(&v[c]) {
                    continue;
                }
                out[r] = f.add(&out[r], &f.mul(a, &v[c]));
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(DgError::ShapeMismatch("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `self` left of `other` (same row count).
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(DgError::ShapeMismatch("hstack row mismatch".into()));
        }
        let mut out = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }

    pub fn from_columns(field: FieldSpec, cols: &[Vec<Scalar>], nrows: usize) -> Matrix {
        let mut m = Matrix::zero(field, nrows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), nrows, "column length mismatch");
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn row_reduce(m: &Matrix) -> (Matrix, Vec<usize>) {
    let f = m.field;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..a.cols() {
        if row >= a.rows() {
            break;
        }
        let Some(pr) = (row..a.rows()).find(|&r| !f.is_zero(a.get(r, col))) else {
            continue;
        };
        if pr != row {
            for c in 0..a.cols() {
                let tmp = a.get(row, c).clone();
                a.set(row, c, a.get(pr, c).clone());
                a.set(pr, c, tmp);
            }
        }
        let inv = f.inv(a.get(row, col)).expect("pivot is nonzero");
        for c in col..a.cols() {
            let v = f.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows() {
            if r == row || f.is_zero(a.get(r, col)) {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols() {
                let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    row_reduce(m).1.len()
}

/// A subspace of k^ambient given by a linearly independent basis.
/// The basis is kept in reduced echelon form, so equal subspaces have
/// equal representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub field: FieldSpec,
    pub ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace::from_spanning(field, ambient, &Matrix::identity(field, ambient).rows_vec())
    }

    /// Builds the subspace spanned by the given vectors (reducing to a basis).
    pub fn from_spanning(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("rectangular spanning set");
        assert_eq!(m.cols(), ambient, "vectors must have ambient length");
        let (rref, pivots) = row_reduce(&m);
        let basis = (0..pivots.len()).map(|r| rref.row(r)).collect();
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the echelon basis
        let f = self.field;
        let mut v = v.to_vec();
        for b in &self.basis {
            let pivot = b
                .iter()
                .position(|x| !f.is_zero(x))
                .expect("basis rows are nonzero");
            if f.is_zero(&v[pivot]) {
                continue;
            }
            let factor = v[pivot].clone();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = f.sub(vi, &f.mul(&factor, bi));
            }
        }
        v.iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

impl Matrix {
    fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows()).map(|r| self.row(r)).collect()
    }
}

/// Basis of the kernel {v : m v = 0}.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let f = m.field;
    let (rref, pivots) = row_reduce(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![f.zero(); m.cols()];
        v[fc] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(rref.get(r, fc));
        }
        basis.push(v);
    }
    Subspace::from_spanning(f, m.cols(), &basis)
}

/// Basis of the column space of `m`, as vectors in k^rows.
pub fn image_basis(m: &Matrix) -> Subspace {
    let cols: Vec<Vec<Scalar>> = (0..m.cols()).map(|c| m.col(c)).collect();
    Subspace::from_spanning(m.field, m.rows(), &cols)
}

/// One solution of m x = b, or None when inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let f = m.field;
    let bm = Matrix::from_columns(f, &[b.to_vec()], m.rows());
    let aug = m.hstack(&bm).expect("same row count");
    let (rref, pivots) = row_reduce(&aug);
    // a pivot in the last column means inconsistency
    if pivots.contains(&m.cols()) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rref.get(r, m.cols()).clone();
    }
    Some(x)
}

/// An incrementally maintained echelon set: rows kept reduced, indexed by
/// pivot column.
struct Echelon {
    field: FieldSpec,
    rows: Vec<(usize, Vec<Scalar>)>, // (pivot column, normalized row)
}

impl Echelon {
    fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
        }
    }

    /// Reduces `v` against the rows; returns the remainder.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = v[*pivot].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = f.sub(vi, &f.mul(&factor, ri));
            }
        }
        v
    }

    /// Inserts `v` if independent; returns true when the rank grew.
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[pivot]).expect("pivot nonzero");
        for x in &mut r {
            *x = f.mul(x, &inv);
        }
        self.rows.push((pivot, r));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }
}

/// Dimension and representative vectors for ambient/sub.
///
/// The representatives extend a basis of `sub` to a basis of `ambient`; they
/// are drawn from the ambient basis vectors.
pub fn quotient_data(ambient: &Subspace, sub: &Subspace) -> Result<(usize, Vec<Vec<Scalar>>)> {
    if sub.ambient != ambient.ambient {
        return Err(DgError::ShapeMismatch(
            "quotient of spaces in different ambient dimensions".into(),
        ));
    }
    if !ambient.contains_subspace(sub) {
        return Err(DgError::NotASubspace);
    }
    let f = ambient.field;
    let mut ech = Echelon::new(f);
    for v in sub.basis() {
        ech.insert(v);
    }
    let mut reps = Vec::new();
    for v in ambient.basis() {
        if ech.insert(v) {
            reps.push(v.clone());
        }
    }
    debug_assert_eq!(ech.rows.len(), ambient.dim());
    Ok((ambient.dim() - sub.dim(), reps))
}

/// Coordinates of `v` in terms of the given (independent) spanning vectors,
/// or None when `v` lies outside their span.
pub fn coordinates_in(basis: &[Vec<Scalar>], v: &[Scalar], field: FieldSpec) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if v.iter().all(|x| field.is_zero(x)) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let m = Matrix::from_columns(field, basis, v.len());
    solve(&m, v)
}
