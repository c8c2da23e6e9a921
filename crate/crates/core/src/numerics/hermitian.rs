use faer::{Mat, Side};

use super::{default_reality_tolerance, ComplexMatrix, Spectrum, C64};
use crate::error::{Error, Result};

/// Eigen-decomposition of a hermitian matrix. Eigenvalues are returned with
/// zero imaginary part in ascending order; eigenvectors are orthonormal columns.
///
/// Purely real input takes the real-symmetric path, which is several times
/// faster for the real Dicke-type Hamiltonians that dominate the scans.
pub fn diagonalize_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    diagonalize_hermitian_with(m, true)
}

pub fn diagonalize_hermitian_with(m: &ComplexMatrix, vectors: bool) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::shape(
            "square matrix",
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    if !m.is_finite() {
        return Err(Error::ContractViolation(
            "matrix has non-finite entries".into(),
        ));
    }
    if !m.is_hermitian() {
        return Err(Error::ContractViolation(format!(
            "diagonalize_hermitian requires a hermitian matrix (defect {:.3e}, max-norm {:.3e})",
            m.hermiticity_defect(),
            m.max_abs()
        )));
    }
    let n = m.rows();
    let tol = default_reality_tolerance(m.max_abs());
    if n == 0 {
        return Ok(Spectrum::new(
            Vec::new(),
            vectors.then(|| ComplexMatrix::zeros(0, 0)),
            tol,
        ));
    }

    let converged = |_| Error::NoConvergence { iterations: 0 };
    let real = m.as_slice().iter().all(|z| z.im == 0.0);
    let (values, vecs) = if real {
        let a = Mat::<f64>::from_fn(n, n, |i, k| m[(i, k)].re);
        if vectors {
            let evd = a.self_adjoint_eigen(Side::Lower).map_err(converged)?;
            let s = evd.S();
            let u = evd.U();
            let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
            let v = ComplexMatrix::from_fn(n, n, |i, k| C64::new(u[(i, k)], 0.0));
            (values, Some(v))
        } else {
            (
                a.self_adjoint_eigenvalues(Side::Lower).map_err(converged)?,
                None,
            )
        }
    } else {
        let a = Mat::<C64>::from_fn(n, n, |i, k| m[(i, k)]);
        if vectors {
            let evd = a.self_adjoint_eigen(Side::Lower).map_err(converged)?;
            let s = evd.S();
            let u = evd.U();
            let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
            let v = ComplexMatrix::from_fn(n, n, |i, k| u[(i, k)]);
            (values, Some(v))
        } else {
            (
                a.self_adjoint_eigenvalues(Side::Lower).map_err(converged)?,
                None,
            )
        }
    };

    let eigenvalues = values.into_iter().map(|x| C64::new(x, 0.0)).collect();
    Ok(Spectrum::new(eigenvalues, vecs, tol))
}
