use std::ops::{Index, IndexMut};

use serde::Serialize;

use super::{C64, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    General,
    Hermitian,
    Diagonal,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    symmetry: Symmetry,
}

/// Relative tolerance behind the `Hermitian` tag.
pub(crate) const HERMITIAN_TAG_TOL: f64 = 1e-12;

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
            symmetry: if rows == cols {
                Symmetry::Diagonal
            } else {
                Symmetry::General
            },
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![ONE; n])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m.symmetry = Symmetry::Diagonal;
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Builds a general-tagged matrix from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for k in 0..cols {
                data.push(f(i, k));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            data,
            symmetry: Symmetry::General,
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape(format!("{c} columns per row"), "ragged rows"));
        }
        Ok(Self::from_fn(r, c, |i, k| rows[i][k]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let owned: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&owned)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix {
            rows,
            cols,
            data,
            symmetry: Symmetry::General,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols + k])
            .collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub(crate) fn select_columns(&self, order: &[usize]) -> Self {
        let mut out = Self::from_fn(self.rows, order.len(), |i, k| self[(i, order[k])]);
        out.symmetry = Symmetry::General;
        out
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::shape(
                format!("{r} rows per column"),
                "ragged columns",
            ));
        }
        Ok(Self::from_fn(r, c, |i, k| columns[k][i]))
    }

    /// Largest entry magnitude, ‖M‖_max.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// max |M[i][k] − conj(M[k][i])|; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in i..n {
                let d = (self[(i, k)] - self[(k, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TAG_TOL * self.max_abs()
    }

    fn off_diagonal_is_zero(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|k| i == k || self[(i, k)] == ZERO))
    }

    /// Re-derives the symmetry tag from the entries.
    pub fn detect_symmetry(mut self) -> Self {
        self.symmetry = if self.is_square() && self.off_diagonal_is_zero() {
            Symmetry::Diagonal
        } else if self.is_hermitian() {
            Symmetry::Hermitian
        } else {
            Symmetry::General
        };
        self
    }

    /// Tags the matrix hermitian, checking the tag invariant.
    pub fn into_hermitian(mut self) -> Result<Self> {
        if !self.is_hermitian() {
            return Err(Error::ContractViolation(format!(
                "matrix is not hermitian (defect {:.3e}, max-norm {:.3e})",
                self.hermiticity_defect(),
                self.max_abs()
            )));
        }
        if self.symmetry != Symmetry::Diagonal {
            self.symmetry = Symmetry::Hermitian;
        }
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::from_fn(self.cols, self.rows, |i, k| self[(k, i)].conj());
        out.symmetry = self.symmetry;
        out
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * s).collect(),
        );
        if self.symmetry == Symmetry::Diagonal {
            out.symmetry = Symmetry::Diagonal;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(
                format!("{} rows on the right operand", self.cols),
                other.rows,
            ));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut data = vec![ZERO; n * p];
        for i in 0..n {
            let out_row = &mut data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(n, p, data))
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::shape(self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Principal submatrix on the given index set (in the given order).
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let mut out = Self::from_fn(indices.len(), indices.len(), |a, b| {
            self[(indices[a], indices[b])]
        });
        out.symmetry = self.symmetry;
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, k): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + k]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    /// Mutable access drops the symmetry tag back to `General`.
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut C64 {
        self.symmetry = Symmetry::General;
        &mut self.data[i * self.cols + k]
    }
}
