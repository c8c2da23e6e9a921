//! Spectra of H and ℋ, their comparison, and eigenstates of H obtained from
//! those of ℋ through ρ⁻¹.
//!
//! Both H and ℋ commute with the parity Π, so every diagonalization here runs
//! on the two parity sectors separately. Besides quartering the cost this
//! gives every eigenvector a definite parity even inside degenerate levels
//! that straddle the sectors.

use serde::Serialize;

use crate::basis::SpinBosonBasis;
use crate::error::{Error, Result};
use crate::metric::MetricFactors;
use crate::model::{build_h_image_sparse, build_h_sparse, validate, ModelParams};
use crate::numerics::{
    default_reality_tolerance, diagonalize_general_with, diagonalize_hermitian_with, inner,
    sorted_distance, ComplexMatrix, SparseMatrix, Spectrum, C64, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    General,
    Hermitian,
}

/// Diagonalizes a parity-conserving operator sector by sector and merges the
/// results. Eigenvectors, when requested, are embedded in the full space.
pub fn sector_spectrum(
    m: &SparseMatrix,
    basis: SpinBosonBasis,
    solver: Solver,
    vectors: bool,
) -> Result<Spectrum> {
    if m.dim() != basis.dim() {
        return Err(Error::shape(basis.dim(), m.dim()));
    }
    let dim = basis.dim();
    let mut values = Vec::with_capacity(dim);
    let mut columns: Vec<Vec<C64>> = Vec::new();
    for even in [true, false] {
        let idx = basis.parity_sector(even);
        if idx.is_empty() {
            continue;
        }
        let block = m.dense_block(&idx)?;
        let s = match solver {
            Solver::General => diagonalize_general_with(&block, vectors)?,
            Solver::Hermitian => diagonalize_hermitian_with(&block.into_hermitian()?, vectors)?,
        };
        values.extend_from_slice(&s.eigenvalues);
        if let Some(v) = &s.eigenvectors {
            for k in 0..v.cols() {
                let mut full = vec![ZERO; dim];
                for (pos, &i) in idx.iter().enumerate() {
                    full[i] = v[(pos, k)];
                }
                columns.push(full);
            }
        }
    }
    let vecs = if vectors {
        Some(ComplexMatrix::from_fn(dim, columns.len(), |i, k| {
            columns[k][i]
        }))
    } else {
        None
    };
    Ok(Spectrum::new(
        values,
        vecs,
        default_reality_tolerance(m.max_abs()),
    ))
}

/// Spectrum of H from the general solver.
pub fn h_spectrum(p: &ModelParams, vectors: bool) -> Result<Spectrum> {
    sector_spectrum(&build_h_sparse(p), p.basis(), Solver::General, vectors)
}

/// Spectrum of ℋ from the hermitian solver; rejects invalid parameters.
pub fn image_spectrum(p: &ModelParams, vectors: bool) -> Result<Spectrum> {
    sector_spectrum(
        &build_h_image_sparse(p)?,
        p.basis(),
        Solver::Hermitian,
        vectors,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralComparison {
    pub spectrum_h: Spectrum,
    pub spectrum_image: Spectrum,
    /// Largest distance between the sorted spectra.
    pub max_pairwise_gap: f64,
    /// Largest |Im λ| over the spectrum of H.
    pub reality_defect: f64,
    pub norm_h: f64,
    pub norm_image: f64,
    /// False when the comparison ran in diagnostic mode on invalid parameters.
    pub quasi_hermitian: bool,
}

impl SpectralComparison {
    pub fn relative_gap(&self) -> f64 {
        self.max_pairwise_gap / self.norm_image.max(f64::MIN_POSITIVE)
    }

    pub fn relative_reality_defect(&self) -> f64 {
        self.reality_defect / self.norm_h.max(f64::MIN_POSITIVE)
    }

    /// gap ≤ tol·‖ℋ‖ and defect ≤ tol·‖H‖.
    pub fn agrees(&self, tol: f64) -> bool {
        self.max_pairwise_gap <= tol * self.norm_image && self.reality_defect <= tol * self.norm_h
    }
}

/// Diagonalizes H (general solver) and ℋ (hermitian solver) on the same
/// basis. Parameters failing [`validate`] are not rejected: ℋ is then built
/// from the formal couplings sgn(x)√|xy| so complex pairs of H can be
/// exhibited against a real reference.
pub fn compare_spectra(p: &ModelParams) -> Result<SpectralComparison> {
    let report = validate(p);
    let basis = p.basis();
    let h = build_h_sparse(p);
    let image = if report.quasi_hermitian {
        build_h_image_sparse(p)?
    } else {
        p.image_terms().sparse(&basis)
    };
    let (spectrum_h, spectrum_image) = rayon::join(
        || sector_spectrum(&h, basis, Solver::General, false),
        || sector_spectrum(&image, basis, Solver::Hermitian, false),
    );
    let (spectrum_h, spectrum_image) = (spectrum_h?, spectrum_image?);
    Ok(SpectralComparison {
        max_pairwise_gap: sorted_distance(&spectrum_h.eigenvalues, &spectrum_image.eigenvalues),
        reality_defect: spectrum_h.reality_defect(),
        spectrum_h,
        spectrum_image,
        norm_h: h.max_abs(),
        norm_image: image.max_abs(),
        quasi_hermitian: report.quasi_hermitian,
    })
}

/// Eigenvalues with η-orthonormal eigenvectors of H as columns.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub eigenvalues: Vec<f64>,
    pub states: ComplexMatrix,
}

impl EigenBasis {
    pub fn state(&self, k: usize) -> Vec<C64> {
        self.states.column(k)
    }
}

/// Maps eigenvectors of ℋ to eigenvectors of H, v = ρ⁻¹ψ, and
/// η-orthonormalizes each cluster of eigenvalues closer than
/// 1e−8·`norm_image` by Gram–Schmidt.
pub fn map_eigenstates(
    mf: &MetricFactors,
    image: &Spectrum,
    norm_image: f64,
) -> Result<EigenBasis> {
    let vectors = image
        .eigenvectors
        .as_ref()
        .ok_or_else(|| Error::ContractViolation("image spectrum carries no eigenvectors".into()))?;
    if vectors.rows() != mf.basis().dim() {
        return Err(Error::shape(mf.basis().dim(), vectors.rows()));
    }
    let values = image.real_parts();
    let mut states: Vec<Vec<C64>> = Vec::with_capacity(values.len());
    let threshold = 1e-8 * norm_image.max(1.0);
    let mut cluster_start = 0;
    for k in 0..values.len() {
        if k > 0 && values[k] - values[k - 1] > threshold {
            cluster_start = k;
        }
        let mut v = mf.apply_rho_inv(&vectors.column(k))?;
        for prev in &states[cluster_start..k] {
            let overlap = mf.eta_inner(prev, &v)?;
            for (x, y) in v.iter_mut().zip(prev) {
                *x -= overlap * y;
            }
        }
        let norm = mf.eta_inner(&v, &v)?.re;
        if !(norm > 0.0) {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / norm.sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
        states.push(v);
    }
    Ok(EigenBasis {
        eigenvalues: values,
        states: ComplexMatrix::from_columns(&states)?,
    })
}

/// Eigenbasis of H via the hermitian image.
pub fn h_eigenbasis(p: &ModelParams, mf: &MetricFactors) -> Result<EigenBasis> {
    let image = build_h_image_sparse(p)?;
    let s = sector_spectrum(&image, p.basis(), Solver::Hermitian, true)?;
    map_eigenstates(mf, &s, image.max_abs())
}

/// ⟨v, Π v⟩ / ⟨v, v⟩ for each column.
pub fn parity_expectations(basis: SpinBosonBasis, states: &ComplexMatrix) -> Vec<f64> {
    let pi = basis.parity_diagonal();
    (0..states.cols())
        .map(|k| {
            let v = states.column(k);
            let num: f64 = v.iter().zip(&pi).map(|(z, p)| z.norm_sqr() * p).sum();
            num / v.iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
        .collect()
}

/// max_k ‖H v_k − λ_k v_k‖ / (‖H‖_max ‖v_k‖).
pub fn eigen_residual(h: &SparseMatrix, values: &[C64], states: &ComplexMatrix) -> Result<f64> {
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for (k, &lambda) in values.iter().enumerate() {
        let v = states.column(k);
        let hv = h.mul_vec(&v)?;
        let r: f64 = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let n = inner(&v, &v).re.sqrt();
        worst = worst.max(r / (scale * n));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Spin;
    use crate::metric::{build_metric, expectation};
    use crate::model::{build_h, CounterSign};
    use crate::numerics::{diagonalize_general, diagonalize_hermitian};

    fn nonhermitian_dicke(j: Spin, cutoff: usize) -> ModelParams {
        ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0, 0.5, CounterSign::Plus, j, cutoff).unwrap()
    }

    #[test]
    fn sector_spectrum_matches_full_solve() {
        let p = ModelParams {
            theta1: 0.2,
            theta2: 0.1,
            alpha: 0.3,
            beta: 0.6,
            xi1: 0.5,
            j: Spin::from_twice(2),
            cutoff: 7,
            ..ModelParams::default()
        };
        let sectors = h_spectrum(&p, false).unwrap();
        let full = diagonalize_general(&build_h(&p)).unwrap();
        assert!(sorted_distance(&sectors.eigenvalues, &full.eigenvalues) < 1e-10);
        let image = image_spectrum(&p, false).unwrap();
        let full_image = diagonalize_hermitian(&crate::model::build_h_image(&p).unwrap()).unwrap();
        assert!(sorted_distance(&image.eigenvalues, &full_image.eigenvalues) < 1e-12);
    }

    #[test]
    fn hermitian_params_compare_exactly() {
        let p = ModelParams::ddm(1.0, 0.8, 0.1, 0.3, 0.2, [0.0; 3], Spin::from_twice(2), 8);
        let c = compare_spectra(&p).unwrap();
        assert!(c.quasi_hermitian);
        assert!(c.max_pairwise_gap < 1e-10);
        assert!(c.reality_defect < 1e-10);
    }

    #[test]
    fn nonhermitian_dicke_matches_image() {
        let c = compare_spectra(&nonhermitian_dicke(Spin::from_twice(4), 16)).unwrap();
        assert!(c.max_pairwise_gap <= 1e-8, "{}", c.max_pairwise_gap);
        assert!(c.agrees(1e-7));
    }

    #[test]
    fn broken_params_show_complex_pairs() {
        let p = ModelParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: -1.0,
            j: Spin::HALF,
            cutoff: 10,
            ..ModelParams::default()
        };
        let c = compare_spectra(&p).unwrap();
        assert!(!c.quasi_hermitian);
        assert!(c.reality_defect > 1e-3, "{}", c.reality_defect);
        assert!(!c.spectrum_h.is_real);
    }

    #[test]
    fn mapped_states_are_eigenvectors_and_eta_orthonormal() {
        let p = ModelParams {
            theta1: 0.15,
            theta2: 0.3,
            alpha: 0.4,
            beta: 0.2,
            xi1: 0.3,
            xi2: 1.1,
            j: Spin::from_twice(3),
            cutoff: 8,
            ..ModelParams::default()
        };
        let mf = build_metric(&p).unwrap();
        let eb = h_eigenbasis(&p, &mf).unwrap();
        let h = build_h_sparse(&p);
        let values: Vec<C64> = eb.eigenvalues.iter().map(|&x| C64::from(x)).collect();
        assert!(eigen_residual(&h, &values, &eb.states).unwrap() < 1e-8);
        let gram = mf.eta_gram(&eb.states).unwrap();
        let defect = gram
            .sub(&ComplexMatrix::identity(gram.rows()))
            .unwrap()
            .max_abs();
        assert!(defect < 1e-10, "{defect}");
    }

    #[test]
    fn identity_metric_maps_trivially() {
        let p = ModelParams::ddm(1.0, 1.0, 0.0, 0.3, 0.3, [0.0; 3], Spin::HALF, 5);
        let mf = build_metric(&p).unwrap();
        let s = image_spectrum(&p, true).unwrap();
        let eb = map_eigenstates(&mf, &s, 1.0).unwrap();
        let diff = eb
            .states
            .sub(s.eigenvectors.as_ref().unwrap())
            .unwrap()
            .max_abs();
        assert!(diff < 1e-14);
    }

    #[test]
    fn degenerate_levels_are_orthonormalized() {
        // Uncoupled resonant model: heavy degeneracy within each excitation level.
        let p = ModelParams::free(1.0, 1.0, Spin::from_twice(4), 6);
        let mf = build_metric(&p).unwrap();
        let eb = h_eigenbasis(&p, &mf).unwrap();
        let gram = mf.eta_gram(&eb.states).unwrap();
        assert!(
            gram.sub(&ComplexMatrix::identity(gram.rows()))
                .unwrap()
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn ground_state_observables_real() {
        let p = nonhermitian_dicke(Spin::from_twice(4), 12);
        let mf = build_metric(&p).unwrap();
        let eb = h_eigenbasis(&p, &mf).unwrap();
        let v = eb.state(0);
        let jz = p.basis().spin_ops().2;
        let e = expectation(&mf, &jz, &v).unwrap();
        assert!(e.im.abs() < 1e-12);
        assert!(e.re > -2.0 && e.re < 2.0);
    }

    #[test]
    fn eigenstates_have_definite_parity() {
        let p = nonhermitian_dicke(Spin::from_twice(2), 8);
        let s = h_spectrum(&p, true).unwrap();
        for x in parity_expectations(p.basis(), s.eigenvectors.as_ref().unwrap()) {
            assert!((x.abs() - 1.0).abs() < 1e-12);
        }
    }
}
