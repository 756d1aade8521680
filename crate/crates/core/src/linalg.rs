//! Sparse exact linear algebra.
//!
//! Vectors are sorted `(index, coefficient)` lists with no stored zeros.
//! Matrices are stored by column, since every map in this crate is built by
//! evaluating it on basis vectors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type SVec = Vec<(usize, Scalar)>;

/// Accumulates a sparse vector out of order.
#[derive(Clone, Debug)]
pub struct Accum {
    field: Field,
    entries: BTreeMap<usize, Scalar>,
}

impl Accum {
    pub fn new(field: Field) -> Self {
        Accum { field, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if self.field.is_zero(c) {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(x) => *x = self.field.add(x, c),
            None => {
                self.entries.insert(i, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &SVec) {
        if self.field.is_zero(c) {
            return;
        }
        for (i, x) in v {
            let t = self.field.mul(c, x);
            self.add(*i, &t);
        }
    }

    pub fn finish(self) -> SVec {
        let f = self.field;
        self.entries.into_iter().filter(|(_, c)| !f.is_zero(c)).collect()
    }
}

pub fn sv_scale(field: &Field, c: &Scalar, v: &SVec) -> SVec {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

/// `a + c * b`.
pub fn sv_axpy(field: &Field, a: &SVec, c: &Scalar, b: &SVec) -> SVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let t = field.mul(c, &b[j].1);
            if !field.is_zero(&t) {
                out.push((b[j].0, t));
            }
            j += 1;
        } else {
            let t = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&t) {
                out.push((a[i].0, t));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_sub(field: &Field, a: &SVec, b: &SVec) -> SVec {
    sv_axpy(field, a, &field.from_i64(-1), b)
}

pub fn sv_get(v: &SVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

pub fn sv_unit(field: &Field, i: usize) -> SVec {
    vec![(i, field.one())]
}

/// Exact sparse matrix, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SVec>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel: Vec<SVec>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let columns = (0..n).map(|i| sv_unit(&field, i)).collect();
        Matrix { field, rows: n, cols: n, columns }
    }

    pub fn from_columns(field: Field, rows: usize, columns: Vec<SVec>) -> Result<Self> {
        for col in &columns {
            for (r, c) in col {
                if *r >= rows {
                    return Err(Error::Dimension(format!("row index {r} out of {rows}")));
                }
                if !field.owns(c) || field.is_zero(c) {
                    return Err(Error::Invalid(format!("bad matrix entry {c:?}")));
                }
            }
            if col.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invalid("unsorted column".into()));
            }
        }
        Ok(Matrix { field, rows, cols: columns.len(), columns })
    }

    /// Row-major integer entries, mainly for tests and examples.
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let columns = (0..ncols)
            .map(|j| {
                let mut acc = Accum::new(field);
                for (i, row) in rows.iter().enumerate() {
                    acc.add(i, &field.from_i64(row[j]));
                }
                acc.finish()
            })
            .collect();
        Ok(Matrix { field, rows: nrows, cols: ncols, columns })
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column(&self, j: usize) -> &SVec {
        &self.columns[j]
    }
    pub fn columns(&self) -> &[SVec] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sv_get(&self.columns[c], r).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut acc = Accum::new(self.field);
        for (j, c) in v {
            acc.add_scaled(c, &self.columns[*j]);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.axpy(&self.field.one(), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| sv_axpy(&self.field, a, c, b))
            .collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, columns })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let columns = self.columns.iter().map(|v| sv_scale(&self.field, c, v)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, columns }
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows: Vec<SVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                rows[*i].push((j, c.clone()));
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, columns: rows }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.field);
        for col in &self.columns {
            basis.insert(col.clone());
        }
        basis.len()
    }

    /// Reduced row-echelon form, pivot columns and a kernel basis.
    pub fn rref(&self) -> Result<Rref> {
        for col in &self.columns {
            if col.iter().any(|(_, c)| !self.field.owns(c)) {
                return Err(Error::Invalid("matrix entries from mixed fields".into()));
            }
        }
        let f = self.field;
        let mut rows: Vec<SVec> = self.transpose().columns;
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&r| sv_get(&rows[r], col).is_some()) else {
                continue;
            };
            rows.swap(next, found);
            let inv = f.inv(sv_get(&rows[next], col).unwrap());
            rows[next] = sv_scale(&f, &inv, &rows[next]);
            for r in 0..rows.len() {
                if r == next {
                    continue;
                }
                if let Some(c) = sv_get(&rows[r], col).cloned() {
                    rows[r] = sv_axpy(&f, &rows[r], &f.neg(&c), &rows[next]);
                }
            }
            pivots.push(col);
            next += 1;
        }
        let rank = pivots.len();
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut acc = Accum::new(f);
            acc.add(free, &f.one());
            for (r, &p) in pivots.iter().enumerate() {
                if let Some(c) = sv_get(&rows[r], free) {
                    acc.add(p, &f.neg(c));
                }
            }
            kernel.push(acc.finish());
        }
        let reduced = Matrix { field: f, rows: self.cols, cols: self.rows, columns: rows }.transpose();
        Ok(Rref { reduced, rank, pivots, kernel })
    }

    pub fn kernel_basis(&self) -> Vec<SVec> {
        self.rref().expect("single-field matrix").kernel
    }
}

/// Incrementally built echelon basis of a subspace, with leading-term
/// reduction. Each stored row remembers how it was built from the inserted
/// vectors, so membership tests can also return coordinates.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    pivots: BTreeMap<usize, (SVec, SVec)>,
    inserted: usize,
}

impl EchelonBasis {
    pub fn new(field: Field) -> Self {
        EchelonBasis { field, pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Reduces `v` against the basis. Returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &SVec) -> (SVec, SVec) {
        let f = &self.field;
        let mut rem = v.clone();
        let mut coords: SVec = Vec::new();
        // remainder entries below a non-pivot leading index are kept; continue past them
        let mut start = 0usize;
        while let Some(pos) = rem.iter().position(|(i, _)| *i >= start && self.pivots.contains_key(i)) {
            let (lead, c) = rem[pos].clone();
            let (row, how) = &self.pivots[&lead];
            rem = sv_axpy(f, &rem, &f.neg(&c), row);
            coords = sv_axpy(f, &coords, &c, how);
            start = lead + 1;
        }
        (rem, coords)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: SVec) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let f = self.field;
        let (rem, coords) = self.reduce(&v);
        if rem.is_empty() {
            return false;
        }
        let mut how = sv_axpy(&f, &sv_unit(&f, id), &f.from_i64(-1), &coords);
        let (lead, c) = rem[0].clone();
        let inv = f.inv(&c);
        let row = sv_scale(&f, &inv, &rem);
        how = sv_scale(&f, &inv, &how);
        self.pivots.insert(lead, (row, how));
        true
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in the span.
    pub fn solve(&self, v: &SVec) -> Option<SVec> {
        let (rem, coords) = self.reduce(v);
        rem.is_empty().then_some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn identity_has_full_rank() {
        let f = Field::prime(5).unwrap();
        let r = Matrix::identity(f, 3).rref().unwrap();
        assert_eq!(r.rank, 3);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let r = Matrix::zero(Field::Rationals, 2, 4).rref().unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 4);
    }

    #[test]
    fn rank_one_rational() {
        let f = Field::Rationals;
        let m = Matrix::from_rows_i64(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        let r = m.rref().unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        let q = |n: i64| Scalar::Q(BigRational::from_integer(BigInt::from(n)));
        assert_eq!(r.kernel, vec![vec![(0, q(-2)), (1, q(1))]]);
        assert!(m.apply(&r.kernel[0]).is_empty());
        assert_eq!(r.reduced, Matrix::from_rows_i64(f, &[vec![1, 2], vec![0, 0]]).unwrap());
    }

    #[test]
    fn echelon_solve_tracks_coordinates() {
        let f = Field::prime(7).unwrap();
        let mut b = EchelonBasis::new(f);
        let v0 = vec![(0, f.one()), (1, f.from_i64(2))];
        let v1 = vec![(1, f.one()), (2, f.one())];
        assert!(b.insert(v0.clone()));
        assert!(b.insert(v1.clone()));
        let target = sv_axpy(&f, &sv_scale(&f, &f.from_i64(3), &v0), &f.from_i64(5), &v1);
        let coords = b.solve(&target).unwrap();
        assert_eq!(coords, vec![(0, f.from_i64(3)), (1, f.from_i64(5))]);
        assert!(!b.insert(target));
        assert!(b.solve(&vec![(2, f.one())]).is_none());
    }
}
