//! Superradiant phase transition: critical couplings, thermodynamic-limit
//! order parameters, finite-j ground-state order parameters and scans.
//!
//! Couplings are collective: λ₁ = √(2j)·Ω₁, λ₂ = √(2j)·g for the standard
//! Dicke coupling g, λ₃ = √(2j·αβ), λ₄ = √(2j·γδ). With these readings every
//! limit reduces to the standard Dicke result with λ₂ᶜ = √(ωω₀)/2.

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::Spin;
use crate::error::{Error, Result};
use crate::exact::{reduce, BogoliubovReduction};
use crate::metric::{build_metric, expectation};
use crate::model::{build_h_image_sparse, build_h_sparse, validate, ModelParams};
use crate::numerics::{diagonalize_general, diagonalize_hermitian, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderParams {
    pub jz_over_j: f64,
    pub n_over_j: f64,
}

impl OrderParams {
    pub const NORMAL: OrderParams = OrderParams {
        jz_over_j: -1.0,
        n_over_j: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalData {
    /// √(Ω·ω₀); `None` when the Bogoliubov reduction does not exist.
    pub lambda1_c: Option<f64>,
    pub lambda2_c: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    /// ω₀(ω + 2√(θ₁θ₂))/(λ₃ + λ₄)²; `None` when λ₃ + λ₄ = 0.
    pub mu: Option<f64>,
}

/// λ₃ = √(2j·αβ).
pub fn lambda3(p: &ModelParams) -> f64 {
    (2.0 * p.j.value() * p.alpha * p.beta).sqrt()
}

/// λ₄ = √(2j·γδ).
pub fn lambda4(p: &ModelParams) -> f64 {
    (2.0 * p.j.value() * p.gamma * p.delta).sqrt()
}

/// λ₁ = √(2j)·Ω₁, magnitude only.
pub fn lambda1(red: &BogoliubovReduction, j: Spin) -> f64 {
    (2.0 * j.value()).sqrt() * red.big_omega1.abs()
}

pub fn critical_data(p: &ModelParams) -> CriticalData {
    let (l3, l4) = (lambda3(p), lambda4(p));
    let sum = l3 + l4;
    CriticalData {
        lambda1_c: reduce(p).ok().map(|r| (r.big_omega * p.omega0).sqrt()),
        lambda2_c: (p.omega * p.omega0).sqrt() / 2.0,
        lambda3: l3,
        lambda4: l4,
        mu: (sum > 0.0)
            .then(|| p.omega0 * (p.omega + 2.0 * (p.theta1 * p.theta2).sqrt()) / (sum * sum)),
    }
}

/// Tavis–Cummings order parameters for b-mode frequency Ω, spin frequency ω₀
/// and collective coupling λ₁.
pub fn tc_order_params(big_omega: f64, omega0: f64, lambda1: f64) -> OrderParams {
    let l2 = lambda1 * lambda1;
    if l2 <= big_omega * omega0 {
        return OrderParams::NORMAL;
    }
    let r = omega0 * big_omega / l2;
    OrderParams {
        jz_over_j: -r,
        n_over_j: 0.5 * (1.0 - r * r) * l2 / (big_omega * big_omega),
    }
}

pub fn analytic_order_params_tc(red: &BogoliubovReduction, lambda1: f64) -> OrderParams {
    tc_order_params(red.big_omega, red.omega0, lambda1)
}

/// Standard Dicke order parameters, λ₂ᶜ = √(ωω₀)/2.
pub fn analytic_order_params_dicke(omega: f64, omega0: f64, lambda2: f64) -> OrderParams {
    let lc = (omega * omega0).sqrt() / 2.0;
    if lambda2 <= lc {
        return OrderParams::NORMAL;
    }
    let r = (lc / lambda2).powi(2);
    OrderParams {
        jz_over_j: -r,
        n_over_j: 2.0 * lambda2 * lambda2 / (omega * omega) * (1.0 - r * r),
    }
}

/// Order parameters from μ = ω₀(ω + 2√(θ₁θ₂))/(λ₃ + λ₄)²: (−μ, ½(1 − μ²)((λ₃ + λ₄)/(ω + 2√(θ₁θ₂)))²)
/// for μ < 1, the normal phase otherwise. Vanishing couplings give μ = ∞.
pub fn analytic_order_params_general(p: &ModelParams) -> Result<(OrderParams, f64)> {
    let sum = lambda3(p) + lambda4(p);
    let w = p.omega + 2.0 * (p.theta1 * p.theta2).sqrt();
    if !sum.is_finite() || !w.is_finite() {
        return Err(Error::domain(
            "analytic_order_params_general",
            "alpha*beta, gamma*delta and theta1*theta2 must be non-negative",
        ));
    }
    let mu = if sum > 0.0 {
        p.omega0 * w / (sum * sum)
    } else {
        f64::INFINITY
    };
    if !(mu < 1.0) {
        return Ok((OrderParams::NORMAL, mu));
    }
    Ok((
        OrderParams {
            jz_over_j: -mu,
            n_over_j: 0.5 * (1.0 - mu * mu) * (sum / w).powi(2),
        },
        mu,
    ))
}

/// How the ground state is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Hermitian solver on ℋ, ordinary expectations.
    Image,
    /// General solver on H, η-expectations.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffPolicy {
    pub start: usize,
    pub cap: usize,
    /// Convergence threshold on the change of e0/j between successive cutoffs.
    pub tolerance: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy {
            start: 16,
            cap: 512,
            tolerance: 1e-8,
        }
    }
}

impl CutoffPolicy {
    pub fn fixed(cutoff: usize) -> Self {
        CutoffPolicy {
            start: cutoff,
            cap: cutoff,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState {
    pub energy: f64,
    pub jz: f64,
    pub n: f64,
}

/// Ground state at the cutoff stored in `p`.
pub fn ground_state(p: &ModelParams, route: Route) -> Result<GroundState> {
    validate(p).into_result()?;
    match route {
        Route::Image => ground_state_image(p),
        Route::Direct => ground_state_direct(p),
    }
}

fn ground_state_image(p: &ModelParams) -> Result<GroundState> {
    let basis = p.basis();
    let h = build_h_image_sparse(p)?;
    let (jz, nd) = (basis.jz_diagonal(), basis.number_diagonal());
    let mut best: Option<GroundState> = None;
    for even in [true, false] {
        let idx = basis.parity_sector(even);
        if idx.is_empty() {
            continue;
        }
        let s = diagonalize_hermitian(&h.dense_block(&idx)?.into_hermitian()?)?;
        let e = s.eigenvalues[0].re;
        if best.is_some_and(|b| b.energy <= e) {
            continue;
        }
        let v = s.eigenvector(0).expect("vectors requested");
        let w: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
        let norm: f64 = w.iter().sum();
        let avg = |d: &[f64]| idx.iter().zip(&w).map(|(&i, x)| d[i] * x).sum::<f64>() / norm;
        best = Some(GroundState {
            energy: e,
            jz: avg(&jz),
            n: avg(&nd),
        });
    }
    best.ok_or_else(|| Error::InvalidBasis("empty basis".into()))
}

fn ground_state_direct(p: &ModelParams) -> Result<GroundState> {
    let basis = p.basis();
    let mf = build_metric(p)?;
    let h = build_h_sparse(p);
    let mut best: Option<(C64, Vec<C64>)> = None;
    for even in [true, false] {
        let idx = basis.parity_sector(even);
        if idx.is_empty() {
            continue;
        }
        let s = diagonalize_general(&h.dense_block(&idx)?)?;
        let e = s.eigenvalues[0];
        if best.as_ref().is_some_and(|b| b.0.re <= e.re) {
            continue;
        }
        let local = s.eigenvector(0).expect("vectors requested");
        let mut v = vec![ZERO; basis.dim()];
        for (&i, z) in idx.iter().zip(local) {
            v[i] = z;
        }
        best = Some((e, v));
    }
    let (e, v) = best.ok_or_else(|| Error::InvalidBasis("empty basis".into()))?;
    let jz = crate::numerics::ComplexMatrix::from_real_diagonal(&basis.jz_diagonal());
    let n = crate::numerics::ComplexMatrix::from_real_diagonal(&basis.number_diagonal());
    Ok(GroundState {
        energy: e.re,
        jz: expectation(&mf, &jz, &v)?.re,
        n: expectation(&mf, &n, &v)?.re,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub coupling: f64,
    pub j: Spin,
    pub cutoff: usize,
    pub jz_over_j: f64,
    pub n_over_j: f64,
    pub e0_over_j: f64,
    pub analytic_jz: f64,
    pub analytic_n: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ScanRecord {
    fn failed(coupling: f64, j: Spin, reason: String) -> Self {
        ScanRecord {
            coupling,
            j,
            cutoff: 0,
            jz_over_j: f64::NAN,
            n_over_j: f64::NAN,
            e0_over_j: f64::NAN,
            analytic_jz: f64::NAN,
            analytic_n: f64::NAN,
            converged: false,
            failure: Some(reason),
        }
    }
}

/// Ground-state order parameters of `p` (its `cutoff` field is ignored),
/// doubling the cutoff from `policy.start` until e0/j changes by less than
/// `policy.tolerance` or `policy.cap` is reached. The coupling column is λ₃.
pub fn finite_j_order_params(
    p: &ModelParams,
    policy: CutoffPolicy,
    route: Route,
) -> Result<ScanRecord> {
    if p.j == Spin::ZERO {
        return Err(Error::domain(
            "finite_j_order_params",
            "spin j must be positive",
        ));
    }
    if policy.start == 0 || policy.cap < policy.start {
        return Err(Error::Config(format!(
            "cutoff policy needs 0 < start <= cap (start {}, cap {})",
            policy.start, policy.cap
        )));
    }
    validate(p).into_result()?;
    let j = p.j.value();
    let (analytic, _) = analytic_order_params_general(p)?;
    let mut cutoff = policy.start;
    let mut previous: Option<f64> = None;
    loop {
        let gs = ground_state(&p.with_basis(p.j, cutoff), route)?;
        let e0 = gs.energy / j;
        let converged = previous.is_some_and(|e| (e - e0).abs() < policy.tolerance);
        if converged || cutoff >= policy.cap {
            return Ok(ScanRecord {
                coupling: lambda3(p),
                j: p.j,
                cutoff,
                jz_over_j: gs.jz / j,
                n_over_j: gs.n / j,
                e0_over_j: e0,
                analytic_jz: analytic.jz_over_j,
                analytic_n: analytic.n_over_j,
                converged,
                failure: None,
            });
        }
        previous = Some(e0);
        cutoff = (cutoff * 2).min(policy.cap);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Collective rotating coupling √(2j)·Ω₁ of the reduced model.
    Lambda1,
    /// Standard-Dicke collective coupling; all four spin couplings scaled
    /// together so that √(2j·αβ) = λ₂.
    Lambda2,
    /// A model field set directly (omega, alpha, ...).
    Field(String),
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda1" => Ok(SweepParam::Lambda1),
            "lambda2" => Ok(SweepParam::Lambda2),
            f if FIELDS.contains(&f) => Ok(SweepParam::Field(f.to_string())),
            other => Err(Error::Config(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepParam::Lambda1 => f.write_str("lambda1"),
            SweepParam::Lambda2 => f.write_str("lambda2"),
            SweepParam::Field(name) => f.write_str(name),
        }
    }
}

/// Real model fields that can be swept.
pub const FIELDS: [&str; 11] = [
    "omega", "omega0", "theta1", "theta2", "alpha", "beta", "gamma", "delta", "xi1", "xi2", "xi3",
];

/// Sets a real model field by name.
pub fn set_field(p: &mut ModelParams, name: &str, value: f64) -> Result<()> {
    let slot = match name {
        "omega" => &mut p.omega,
        "omega0" => &mut p.omega0,
        "theta1" => &mut p.theta1,
        "theta2" => &mut p.theta2,
        "alpha" => &mut p.alpha,
        "beta" => &mut p.beta,
        "gamma" => &mut p.gamma,
        "delta" => &mut p.delta,
        "xi1" => &mut p.xi1,
        "xi2" => &mut p.xi2,
        "xi3" => &mut p.xi3,
        other => return Err(Error::Config(format!("unknown model field `{other}`"))),
    };
    *slot = value;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub j_list: Vec<Spin>,
}

impl SweepSpec {
    /// Inclusive linear grid.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!(
                "sweep.steps must be at least 2 (got {})",
                self.steps
            )));
        }
        if !(self.start < self.stop) {
            return Err(Error::Config(format!(
                "sweep.start must be below sweep.stop ({} >= {})",
                self.start, self.stop
            )));
        }
        if self.j_list.is_empty() {
            return Err(Error::Config("sweep.j_list is empty".into()));
        }
        if self.j_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "sweep.j_list must be strictly ascending".into(),
            ));
        }
        Ok(())
    }
}

fn scale_spin_couplings(p: &ModelParams, s: f64) -> ModelParams {
    ModelParams {
        alpha: p.alpha * s,
        beta: p.beta * s,
        gamma: p.gamma * s,
        delta: p.delta * s,
        ..*p
    }
}

/// The model at one sweep point.
pub fn sweep_point(
    base: &ModelParams,
    param: &SweepParam,
    value: f64,
    j: Spin,
) -> Result<ModelParams> {
    let mut p = base.with_basis(j, base.cutoff);
    let two_j = 2.0 * j.value();
    match param {
        SweepParam::Field(name) => set_field(&mut p, name, value)?,
        SweepParam::Lambda2 => {
            // No coupling shape given: use the standard symmetric one.
            if p.alpha == 0.0 && p.beta == 0.0 && p.gamma == 0.0 && p.delta == 0.0 {
                p = ModelParams {
                    alpha: 1.0,
                    beta: 1.0,
                    gamma: 1.0,
                    delta: 1.0,
                    ..p
                };
            }
            let pair = if p.alpha * p.beta != 0.0 {
                p.alpha * p.beta
            } else {
                p.gamma * p.delta
            };
            if pair == 0.0 {
                return Err(Error::domain(
                    "sweep",
                    "lambda2 sweep needs a nonzero spin coupling pair",
                ));
            }
            p = scale_spin_couplings(&p, value / (two_j * pair.abs()).sqrt());
        }
        SweepParam::Lambda1 => {
            let red = reduce(&p)?;
            if red.big_omega1 == 0.0 {
                return Err(Error::domain("sweep", "lambda1 sweep needs alpha*beta > 0"));
            }
            p = scale_spin_couplings(&p, value / (two_j.sqrt() * red.big_omega1.abs()));
        }
    }
    Ok(p)
}

/// (coupling × j) product of finite-j records, coupling-major. Points that
/// fail are kept as rows with `failure` set and NaN values.
pub fn scan(
    base: &ModelParams,
    sweep: &SweepSpec,
    policy: CutoffPolicy,
    route: Route,
) -> Result<Vec<ScanRecord>> {
    sweep.check()?;
    let points: Vec<(f64, Spin)> = sweep
        .grid()
        .into_iter()
        .flat_map(|c| sweep.j_list.iter().map(move |&j| (c, j)))
        .collect();
    Ok(points
        .par_iter()
        .map(|&(c, j)| {
            let record = sweep_point(base, &sweep.param, c, j)
                .and_then(|p| finite_j_order_params(&p, policy, route));
            match record {
                Ok(r) => ScanRecord { coupling: c, ..r },
                Err(e) => ScanRecord::failed(c, j, e.to_string()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::with_tc_constraint;
    use crate::model::CounterSign;

    fn close(a: OrderParams, b: OrderParams, tol: f64) -> bool {
        (a.jz_over_j - b.jz_over_j).abs() <= tol && (a.n_over_j - b.n_over_j).abs() <= tol
    }

    #[test]
    fn tc_reference_values() {
        let o = tc_order_params(1.0, 1.0, 2.0);
        assert!(close(
            o,
            OrderParams {
                jz_over_j: -0.25,
                n_over_j: 1.875
            },
            1e-15
        ));
        assert_eq!(tc_order_params(1.0, 1.0, 1.0), OrderParams::NORMAL);
        assert_eq!(tc_order_params(1.0, 1.0, 0.5), OrderParams::NORMAL);
    }

    #[test]
    fn dicke_reference_values() {
        let o = analytic_order_params_dicke(1.0, 1.0, 1.0);
        assert!(close(
            o,
            OrderParams {
                jz_over_j: -0.25,
                n_over_j: 1.875
            },
            1e-15
        ));
        assert_eq!(
            analytic_order_params_dicke(1.0, 1.0, 0.5),
            OrderParams::NORMAL
        );
        assert!(analytic_order_params_dicke(1.0, 1.0, 1e6).jz_over_j > -1e-12);
    }

    #[test]
    fn continuity_at_transition() {
        let lc = 0.5;
        for eps in [1e-9, 1e-12] {
            let above = analytic_order_params_dicke(1.0, 1.0, lc + eps);
            assert!(close(above, OrderParams::NORMAL, 1e-7));
            let above = tc_order_params(1.3, 0.7, (1.3f64 * 0.7).sqrt() + eps);
            assert!(close(above, OrderParams::NORMAL, 1e-7));
        }
    }

    #[test]
    fn general_reference_values() {
        let j = Spin::from_twice(4);
        let g = 1.0 / 4f64.sqrt();
        let p = ModelParams {
            alpha: g,
            beta: g,
            gamma: g,
            delta: g,
            j,
            ..ModelParams::default()
        };
        assert!((lambda3(&p) - 1.0).abs() < 1e-15 && (lambda4(&p) - 1.0).abs() < 1e-15);
        let (o, mu) = analytic_order_params_general(&p).unwrap();
        assert!((mu - 0.25).abs() < 1e-15);
        assert!((o.jz_over_j + 0.25).abs() < 1e-15);
        let (o, mu) = analytic_order_params_general(&ModelParams::free(1.0, 1.0, j, 4)).unwrap();
        assert_eq!((o, mu), (OrderParams::NORMAL, f64::INFINITY));
    }

    #[test]
    fn general_reduces_to_dicke() {
        let j = Spin::from_twice(10);
        for k in 1..=50 {
            let l2 = 0.04 * k as f64;
            let p = ModelParams::standard_dicke(1.3, 0.8, l2, j, 4).unwrap();
            let (o, _) = analytic_order_params_general(&p).unwrap();
            assert!(close(o, analytic_order_params_dicke(1.3, 0.8, l2), 1e-12));
        }
    }

    #[test]
    fn general_mu_matches_bogoliubov_tc() {
        let j = Spin::from_twice(6);
        for k in 1..=40 {
            let p = ModelParams {
                omega: 1.5,
                omega0: 0.7,
                theta1: 0.2,
                theta2: 0.3,
                alpha: 0.05 * k as f64,
                beta: 0.08 * k as f64,
                xi1: 0.4,
                xi2: 0.1,
                j,
                ..ModelParams::default()
            };
            let p = with_tc_constraint(&p).unwrap();
            let red = reduce(&p).unwrap();
            let tc = analytic_order_params_tc(&red, lambda1(&red, j));
            let (general, _) = analytic_order_params_general(&p).unwrap();
            assert!((tc.jz_over_j - general.jz_over_j).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_data_fields() {
        let p = ModelParams::standard_dicke(1.0, 4.0, 1.0, Spin::from_twice(2), 4).unwrap();
        let c = critical_data(&p);
        assert_eq!(c.lambda2_c, 1.0);
        assert_eq!(c.lambda1_c, Some(2.0));
        assert!((c.mu.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(critical_data(&ModelParams::default()).mu, None);
    }

    #[test]
    fn free_model_records() {
        for twice in [2, 4, 8] {
            let p = ModelParams::free(1.0, 1.0, Spin::from_twice(twice), 4);
            let r = finite_j_order_params(&p, CutoffPolicy::default(), Route::Image).unwrap();
            assert_eq!((r.jz_over_j, r.n_over_j), (-1.0, 0.0));
            assert!(r.converged);
            assert_eq!(r.cutoff, 32);
        }
    }

    #[test]
    fn rejects_spin_zero_and_invalid() {
        let p = ModelParams::swanson(2.0, 0.5, 0.5, 0.0, 8);
        assert!(finite_j_order_params(&p, CutoffPolicy::default(), Route::Image).is_err());
        let q = ModelParams {
            alpha: 1.0,
            beta: -1.0,
            ..ModelParams::default()
        };
        assert!(matches!(
            finite_j_order_params(&q, CutoffPolicy::default(), Route::Image),
            Err(Error::InvalidParameters { .. })
        ));
    }

    #[test]
    fn image_and_direct_routes_agree() {
        for sign in [CounterSign::Plus, CounterSign::Minus] {
            for l2 in [0.3, 0.9] {
                let j = Spin::from_twice(4);
                let s = l2 / (2.0 * j.value()).sqrt();
                let p = ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0 * s, 0.5 * s, sign, j, 24)
                    .unwrap();
                let a = ground_state(&p, Route::Image).unwrap();
                let b = ground_state(&p, Route::Direct).unwrap();
                assert!((a.energy - b.energy).abs() < 1e-9, "{a:?} {b:?}");
                assert!(
                    (a.jz - b.jz).abs() < 1e-8 && (a.n - b.n).abs() < 1e-8,
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn grid_and_ordering() {
        let sweep = SweepSpec {
            param: SweepParam::Lambda2,
            start: 0.2,
            stop: 0.8,
            steps: 3,
            j_list: vec![Spin::from_twice(2), Spin::from_twice(4)],
        };
        assert_eq!(sweep.grid(), vec![0.2, 0.5, 0.8]);
        let base = ModelParams::standard_dicke(1.0, 1.0, 1.0, Spin::HALF, 16).unwrap();
        let recs = scan(
            &base,
            &sweep,
            CutoffPolicy {
                start: 16,
                cap: 32,
                tolerance: 1e-8,
            },
            Route::Image,
        )
        .unwrap();
        assert_eq!(recs.len(), 6);
        let keys: Vec<(f64, u32)> = recs.iter().map(|r| (r.coupling, r.j.twice())).collect();
        assert_eq!(
            keys,
            vec![(0.2, 2), (0.2, 4), (0.5, 2), (0.5, 4), (0.8, 2), (0.8, 4)]
        );
        for r in &recs {
            assert!(r.failure.is_none());
            assert!(r.jz_over_j.abs() <= 1.0 && r.n_over_j >= -1e-10);
        }
    }

    #[test]
    fn sweep_points() {
        let j = Spin::from_twice(8);
        let base =
            ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0, 0.5, CounterSign::Plus, j, 8).unwrap();
        let p = sweep_point(&base, &SweepParam::Lambda2, 0.7, j).unwrap();
        assert!((lambda3(&p) - 0.7).abs() < 1e-14);
        assert!((p.alpha / p.beta - 4.0).abs() < 1e-14);
        let q = sweep_point(&base, &SweepParam::Field("omega0".into()), 2.5, j).unwrap();
        assert_eq!(q.omega0, 2.5);
        let tc = with_tc_constraint(&ModelParams {
            theta1: 0.1,
            theta2: 0.2,
            ..base
        })
        .unwrap();
        let r = sweep_point(&tc, &SweepParam::Lambda1, 1.3, j).unwrap();
        assert!((lambda1(&reduce(&r).unwrap(), j) - 1.3).abs() < 1e-13);
        let sym = sweep_point(&ModelParams::default(), &SweepParam::Lambda2, 0.5, j).unwrap();
        assert!((lambda3(&sym) - 0.5).abs() < 1e-14 && sym.gamma == sym.alpha);
        let lone = ModelParams {
            alpha: 1.0,
            ..ModelParams::default()
        };
        assert!(sweep_point(&lone, &SweepParam::Lambda2, 0.5, j).is_err());
        assert!("foo".parse::<SweepParam>().is_err());
        assert_eq!(
            "beta".parse::<SweepParam>().unwrap(),
            SweepParam::Field("beta".into())
        );
    }

    #[test]
    fn failed_points_are_kept() {
        let sweep = SweepSpec {
            param: SweepParam::Field("beta".into()),
            start: -0.5,
            stop: 0.5,
            steps: 2,
            j_list: vec![Spin::HALF],
        };
        let base = ModelParams {
            alpha: 0.3,
            ..ModelParams::default()
        };
        let recs = scan(&base, &sweep, CutoffPolicy::fixed(8), Route::Image).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs[0].failure.as_deref().unwrap().contains("alpha/beta"));
        assert!(recs[0].jz_over_j.is_nan());
        assert!(recs[1].failure.is_none());
    }

    #[test]
    fn sweep_checks() {
        let mut s = SweepSpec {
            param: SweepParam::Lambda2,
            start: 0.0,
            stop: 1.0,
            steps: 1,
            j_list: vec![Spin::HALF],
        };
        assert!(s.check().is_err());
        s.steps = 3;
        assert!(s.check().is_ok());
        s.j_list = vec![Spin::from_twice(4), Spin::from_twice(2)];
        assert!(s.check().is_err());
    }
}
