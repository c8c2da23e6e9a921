use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Square matrix in coordinate form. Duplicate (row, col) entries are
/// summed when densified.
///
/// Hamiltonians are assembled into this form first: their dense
/// representation is only materialised per parity sector at large sizes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseMatrix {
    pub fn new(dim: usize) -> Self {
        SparseMatrix {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        debug_assert!(row < self.dim && col < self.dim);
        if value != ZERO {
            self.entries.push((row, col, value));
        }
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn map_entries(&self, mut f: impl FnMut(usize, usize, C64) -> C64) -> Self {
        SparseMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(i, k, v)| (i, k, f(i, k, v)))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for &(i, k, v) in &self.entries {
            data[i * n + k] += v;
        }
        ComplexMatrix::from_raw(n, n, data)
    }

    /// Dense principal block on `indices`. Entries coupling the block to the
    /// rest of the space are rejected, since the block would not be invariant.
    pub fn dense_block(&self, indices: &[usize]) -> Result<ComplexMatrix> {
        let mut position = vec![usize::MAX; self.dim];
        for (p, &i) in indices.iter().enumerate() {
            position[i] = p;
        }
        let m = indices.len();
        let mut data = vec![ZERO; m * m];
        for &(i, k, v) in &self.entries {
            match (position[i], position[k]) {
                (usize::MAX, usize::MAX) => {}
                (usize::MAX, _) | (_, usize::MAX) => {
                    return Err(Error::ContractViolation(format!(
                        "entry ({i}, {k}) couples the requested block to its complement"
                    )))
                }
                (a, b) => data[a * m + b] += v,
            }
        }
        Ok(ComplexMatrix::from_raw(m, m, data))
    }

    /// y = M·x.
    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::shape(self.dim, x.len()));
        }
        let mut y = vec![ZERO; self.dim];
        for &(i, k, v) in &self.entries {
            y[i] += v * x[k];
        }
        Ok(y)
    }

    /// Max-norm after merging duplicate coordinates.
    pub fn max_abs(&self) -> f64 {
        let mut sorted = self.entries.clone();
        sorted.sort_by_key(|&(i, k, _)| (i, k));
        let mut worst = 0.0f64;
        let mut iter = sorted.into_iter().peekable();
        while let Some((i, k, mut v)) = iter.next() {
            while let Some(&(i2, k2, v2)) = iter.peek() {
                if (i2, k2) != (i, k) {
                    break;
                }
                v += v2;
                iter.next();
            }
            worst = worst.max(v.norm());
        }
        worst
    }
}
