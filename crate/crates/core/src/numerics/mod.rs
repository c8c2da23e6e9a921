//! Dense complex matrices and the two eigensolvers every other module uses.
//!
//! Matrices are stored row-major. [`diagonalize_hermitian`] is backed by
//! faer's self-adjoint decomposition; [`diagonalize_general`] is a
//! self-contained balanced Hessenberg/QR solver so the two can serve as
//! independent checks on each other.

mod general;
mod hermitian;
mod matrix;
mod sparse;

pub use general::{diagonalize_general, diagonalize_general_with};
pub use hermitian::{diagonalize_hermitian, diagonalize_hermitian_with};
pub use matrix::{ComplexMatrix, Symmetry};
pub use sparse::SparseMatrix;

pub use num_complex::Complex64 as C64;

use serde::Serialize;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Default reality tolerance for a matrix with max-norm `norm`.
pub fn default_reality_tolerance(norm: f64) -> f64 {
    1e-8 * norm.max(1.0)
}

/// Eigenvalues (sorted by real part, then imaginary part) with optional
/// right eigenvectors stored as columns.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    #[serde(skip)]
    pub eigenvectors: Option<ComplexMatrix>,
    pub is_real: bool,
    pub reality_tolerance: f64,
}

impl Spectrum {
    pub(crate) fn new(
        eigenvalues: Vec<C64>,
        eigenvectors: Option<ComplexMatrix>,
        reality_tolerance: f64,
    ) -> Self {
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| cmp_complex(eigenvalues[a], eigenvalues[b]));
        let sorted: Vec<C64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let vectors = eigenvectors.map(|v| v.select_columns(&order));
        let is_real = max_imag(&sorted) <= reality_tolerance;
        Spectrum {
            eigenvalues: sorted,
            eigenvectors: vectors,
            is_real,
            reality_tolerance,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest |Im λ| over the spectrum.
    pub fn reality_defect(&self) -> f64 {
        max_imag(&self.eigenvalues)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// Eigenvector `k` as an owned column, if vectors were computed.
    pub fn eigenvector(&self, k: usize) -> Option<Vec<C64>> {
        self.eigenvectors.as_ref().map(|v| v.column(k))
    }

    /// Re-evaluates `is_real` against a caller-supplied tolerance.
    pub fn with_reality_tolerance(mut self, tol: f64) -> Self {
        self.reality_tolerance = tol;
        self.is_real = self.reality_defect() <= tol;
        self
    }
}

pub(crate) fn max_imag(values: &[C64]) -> f64 {
    values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Total order used for every spectrum: real part, then imaginary part.
pub fn cmp_complex(a: C64, b: C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Largest pairwise distance between two spectra after sorting both.
/// Returns `f64::INFINITY` when the lengths differ.
pub fn sorted_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| cmp_complex(*x, *y));
    b.sort_by(|x, y| cmp_complex(*x, *y));
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Standard inner product ⟨u, v⟩ (conjugate-linear in `u`).
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
