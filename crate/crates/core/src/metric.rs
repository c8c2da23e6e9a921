//! The diagonal similarity ρ = exp(c_b·a†a + c_s·(Jz + j)), the metric
//! η = ρ², and observables hermitian under ⟨u, η v⟩.
//!
//! Because ρ is diagonal in the |n, m⟩ basis, ρMρ⁻¹ is an entrywise rescaling
//! and the similarity is exact on the truncated space.

use serde::Serialize;

use crate::basis::{BasisOps, SpinBosonBasis};
use crate::error::{Error, Result};
use crate::model::{validate, CaseTag, ModelParams};
use crate::numerics::{inner, ComplexMatrix, SparseMatrix, C64, ZERO};

/// Largest admissible |log ρ| on the basis. η = ρ² must stay below the
/// double range (e^709), so the limit is kept a little under half of that.
pub const EXPONENT_LIMIT: f64 = 350.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricFactors {
    c_boson: f64,
    c_spin: f64,
    #[serde(skip)]
    basis: SpinBosonBasis,
    #[serde(skip)]
    log_rho: Vec<f64>,
    #[serde(skip)]
    rho: Vec<f64>,
    #[serde(skip)]
    eta: Vec<f64>,
}

/// Exponents (c_b, c_s) for parameters that pass [`validate`]. Chosen so that
/// every coupling pair is mapped onto its geometric mean.
fn exponents(p: &ModelParams, tag: CaseTag) -> (f64, f64) {
    if tag == CaseTag::Hermitian {
        return (0.0, 0.0);
    }
    let present = |x: f64, y: f64| x != 0.0 && y != 0.0;
    let c_b = if present(p.theta1, p.theta2) {
        0.25 * (p.theta1 / p.theta2).ln()
    } else {
        0.0
    };
    let c_s = match (present(p.alpha, p.beta), present(p.gamma, p.delta)) {
        (true, true) => 0.25 * ((p.alpha * p.gamma) / (p.beta * p.delta)).ln(),
        (true, false) => 0.5 * (p.alpha / p.beta).ln() + c_b,
        (false, true) => 0.5 * (p.gamma / p.delta).ln() - c_b,
        (false, false) => 0.0,
    };
    (c_b, c_s)
}

/// ρ for quasi-hermitian parameters. Invalid parameters are rejected with
/// the violated conditions named.
pub fn build_metric(p: &ModelParams) -> Result<MetricFactors> {
    let report = validate(p).into_result()?;
    let (c_b, c_s) = exponents(p, report.case_tag);
    MetricFactors::from_coefficients(c_b, c_s, p.basis())
}

/// Same case dispatch as [`build_metric`] without the validity check, for
/// diagnostics on broken parameter sets. Ratios that are not positive give
/// non-finite exponents and are rejected.
pub fn build_metric_unchecked(p: &ModelParams) -> Result<MetricFactors> {
    let (c_b, c_s) = exponents(p, validate(p).case_tag);
    MetricFactors::from_coefficients(c_b, c_s, p.basis())
}

impl MetricFactors {
    pub fn from_coefficients(c_boson: f64, c_spin: f64, basis: SpinBosonBasis) -> Result<Self> {
        if !c_boson.is_finite() || !c_spin.is_finite() {
            return Err(Error::domain(
                "build_metric",
                format!("metric exponents must be finite (c_boson = {c_boson}, c_spin = {c_spin})"),
            ));
        }
        let extent =
            c_boson.abs() * basis.cutoff() as f64 + c_spin.abs() * basis.spin().twice() as f64;
        if extent > EXPONENT_LIMIT {
            return Err(Error::MetricOverflow {
                exponent: extent,
                limit: EXPONENT_LIMIT,
            });
        }
        let log_rho: Vec<f64> = basis
            .states()
            .map(|(_, n, m)| c_boson * n as f64 + c_spin * m as f64)
            .collect();
        let rho: Vec<f64> = log_rho.iter().map(|x| x.exp()).collect();
        let eta = rho.iter().map(|r| r * r).collect();
        Ok(MetricFactors {
            c_boson,
            c_spin,
            basis,
            log_rho,
            rho,
            eta,
        })
    }

    pub fn identity(basis: SpinBosonBasis) -> Self {
        Self::from_coefficients(0.0, 0.0, basis).expect("zero exponents")
    }

    pub fn c_boson(&self) -> f64 {
        self.c_boson
    }

    pub fn c_spin(&self) -> f64 {
        self.c_spin
    }

    /// Spin dressing angle Γ; the same number as `c_spin`.
    pub fn gamma(&self) -> f64 {
        self.c_spin
    }

    pub fn basis(&self) -> SpinBosonBasis {
        self.basis
    }

    pub fn log_rho(&self) -> &[f64] {
        &self.log_rho
    }

    pub fn rho_diag(&self) -> &[f64] {
        &self.rho
    }

    pub fn eta_diag(&self) -> &[f64] {
        &self.eta
    }

    pub fn is_identity(&self) -> bool {
        self.c_boson == 0.0 && self.c_spin == 0.0
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.rho.len() {
            return Err(Error::shape(self.rho.len(), n));
        }
        Ok(())
    }

    /// ρ·M·ρ⁻¹.
    pub fn transform(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.conjugate(m, 1.0)
    }

    /// ρ⁻¹·M·ρ.
    pub fn inverse_transform(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.conjugate(m, -1.0)
    }

    fn conjugate(&self, m: &ComplexMatrix, sign: f64) -> Result<ComplexMatrix> {
        if !m.is_square() {
            return Err(Error::shape(
                "square matrix",
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        self.check_dim(m.rows())?;
        if self.is_identity() {
            return Ok(m.clone());
        }
        let x = &self.log_rho;
        Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, k| {
            m[(i, k)] * (sign * (x[i] - x[k])).exp()
        }))
    }

    /// ρ·M·ρ⁻¹ on a sparse matrix.
    pub fn transform_sparse(&self, m: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_dim(m.dim())?;
        let x = &self.log_rho;
        Ok(m.map_entries(|i, k, v| v * (x[i] - x[k]).exp()))
    }

    /// ρ·v: an H eigenvector mapped to the corresponding ℋ eigenvector.
    pub fn apply_rho(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(v.len())?;
        Ok(v.iter().zip(&self.rho).map(|(z, r)| z * r).collect())
    }

    /// ρ⁻¹·v.
    pub fn apply_rho_inv(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(v.len())?;
        Ok(v.iter()
            .zip(&self.log_rho)
            .map(|(z, x)| z * (-x).exp())
            .collect())
    }

    /// ⟨u, η v⟩.
    pub fn eta_inner(&self, u: &[C64], v: &[C64]) -> Result<C64> {
        self.check_dim(u.len())?;
        self.check_dim(v.len())?;
        Ok(u.iter()
            .zip(v)
            .zip(&self.eta)
            .map(|((a, b), e)| a.conj() * b * e)
            .sum())
    }

    /// Gram matrix G[a][b] = ⟨v_a, η v_b⟩ of the columns of `vectors`.
    pub fn eta_gram(&self, vectors: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(vectors.rows())?;
        let cols: Vec<Vec<C64>> = (0..vectors.cols()).map(|k| vectors.column(k)).collect();
        let weighted: Vec<Vec<C64>> = cols
            .iter()
            .map(|c| c.iter().zip(&self.eta).map(|(z, e)| z * e).collect())
            .collect();
        let n = cols.len();
        Ok(ComplexMatrix::from_fn(n, n, |a, b| {
            inner(&cols[a], &weighted[b])
        }))
    }
}

/// ‖η·H − Hᴴ·η‖_max / ‖η·H‖_max; zero exactly when H is η-pseudo-hermitian.
pub fn pseudo_hermiticity_residual(mf: &MetricFactors, h: &ComplexMatrix) -> Result<f64> {
    if !h.is_square() {
        return Err(Error::shape(
            "square matrix",
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    mf.check_dim(h.rows())?;
    let eta = mf.eta_diag();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..h.rows() {
        for k in 0..h.cols() {
            let lhs = h[(i, k)] * eta[i];
            let rhs = h[(k, i)].conj() * eta[k];
            worst = worst.max((lhs - rhs).norm());
            scale = scale.max(lhs.norm());
        }
    }
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

/// ρ⁻¹Xρ for X ∈ {Jx, Jy, Jz, a, a†}: the operators whose η-expectations on
/// H eigenstates equal the ordinary expectations of X in the ℋ picture.
#[derive(Debug, Clone)]
pub struct DressedObservables {
    pub j_x: ComplexMatrix,
    pub j_y: ComplexMatrix,
    pub j_z: ComplexMatrix,
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
}

impl DressedObservables {
    pub fn j_plus(&self) -> ComplexMatrix {
        self.j_x.add(&self.j_y.scale(C64::i())).expect("same shape")
    }

    pub fn j_minus(&self) -> ComplexMatrix {
        self.j_x.sub(&self.j_y.scale(C64::i())).expect("same shape")
    }
}

/// Ĵx = coshΓ·Jx − i·sinhΓ·Jy, Ĵy = coshΓ·Jy + i·sinhΓ·Jx, Ĵz = Jz,
/// â = e^{c_b}·a, â† = e^{−c_b}·a†.
pub fn dressed_observables(mf: &MetricFactors, ops: &BasisOps) -> Result<DressedObservables> {
    mf.check_dim(ops.basis.dim())?;
    let g = mf.gamma();
    let (ch, sh) = (C64::from(g.cosh()), C64::new(0.0, g.sinh()));
    let (jx, jy) = (ops.j_x(), ops.j_y());
    let cb = mf.c_boson();
    Ok(DressedObservables {
        j_x: jx.scale(ch).sub(&jy.scale(sh))?,
        j_y: jy.scale(ch).add(&jx.scale(sh))?,
        j_z: ops.j_z.clone(),
        a: ops.a.scale(C64::from(cb.exp())),
        a_dag: ops.a_dag.scale(C64::from((-cb).exp())),
    })
}

/// ⟨v, η X v⟩ / ⟨v, η v⟩.
pub fn expectation(mf: &MetricFactors, x: &ComplexMatrix, v: &[C64]) -> Result<C64> {
    mf.check_dim(v.len())?;
    let norm = mf.eta_inner(v, v)?;
    if norm.re <= 0.0 || v.iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroVector);
    }
    let xv = x.mul_vec(v)?;
    Ok(mf.eta_inner(v, &xv)? / norm)
}
