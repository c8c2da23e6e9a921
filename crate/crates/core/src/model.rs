//! The non-hermitian Dicke-type Hamiltonian
//!
//! H = ω a†a + θ₁e^{iξ₁}a² + θ₂e^{−iξ₁}a†² + αe^{iξ₂}J₋a† + βe^{−iξ₂}J₊a
//!   + γe^{iξ₃}J₋a + δe^{−iξ₃}J₊a† + ω₀Jz,
//!
//! its hermitian image ℋ = ρHρ⁻¹, the parameter conditions under which that
//! image exists, and the named limits of the model.

use serde::{Deserialize, Serialize};

use crate::basis::{BosonAction, OperatorSum, Spin, SpinAction, SpinBosonBasis};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, SparseMatrix, C64};

/// Absolute tolerance on the quasi-hermiticity combinations αδ − βγ and
/// αδθ₁ − βγθ₂.
pub const QUASI_HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub omega0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub j: Spin,
    pub cutoff: usize,
}

impl Default for ModelParams {
    /// Uncoupled resonant model: ω = ω₀ = 1, j = 1/2, N = 16.
    fn default() -> Self {
        ModelParams::free(1.0, 1.0, Spin::HALF, 16)
    }
}

/// Sign choice γ = ±α, δ = ±β for the non-hermitian Dicke family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterSign {
    Plus,
    Minus,
}

impl CounterSign {
    fn factor(self) -> f64 {
        match self {
            CounterSign::Plus => 1.0,
            CounterSign::Minus => -1.0,
        }
    }
}

impl ModelParams {
    /// All couplings zero.
    pub fn free(omega: f64, omega0: f64, j: Spin, cutoff: usize) -> Self {
        ModelParams {
            omega,
            omega0,
            theta1: 0.0,
            theta2: 0.0,
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 0.0,
            xi1: 0.0,
            xi2: 0.0,
            xi3: 0.0,
            j,
            cutoff,
        }
    }

    /// Dressed Dicke model: the hermitian limit α = β, γ = δ, θ₁ = θ₂.
    #[allow(clippy::too_many_arguments)]
    pub fn ddm(
        omega: f64,
        omega0: f64,
        theta: f64,
        rotating: f64,
        counter_rotating: f64,
        phases: [f64; 3],
        j: Spin,
        cutoff: usize,
    ) -> Self {
        ModelParams {
            theta1: theta,
            theta2: theta,
            alpha: rotating,
            beta: rotating,
            gamma: counter_rotating,
            delta: counter_rotating,
            xi1: phases[0],
            xi2: phases[1],
            xi3: phases[2],
            ..Self::free(omega, omega0, j, cutoff)
        }
    }

    /// Standard Dicke model with α = β = γ = δ = λ₂/√(2j), no phases.
    pub fn standard_dicke(
        omega: f64,
        omega0: f64,
        lambda2: f64,
        j: Spin,
        cutoff: usize,
    ) -> Result<Self> {
        if j == Spin::ZERO {
            return Err(Error::domain("standard_dicke", "spin j must be positive"));
        }
        let g = lambda2 / (2.0 * j.value()).sqrt();
        Ok(ModelParams {
            alpha: g,
            beta: g,
            gamma: g,
            delta: g,
            ..Self::free(omega, omega0, j, cutoff)
        })
    }

    /// Tavis–Cummings limit: θ₁ = θ₂ = γ = δ = 0 (α ≠ β allowed).
    pub fn tavis_cummings(
        omega: f64,
        omega0: f64,
        alpha: f64,
        beta: f64,
        xi2: f64,
        j: Spin,
        cutoff: usize,
    ) -> Self {
        ModelParams {
            alpha,
            beta,
            xi2,
            ..Self::free(omega, omega0, j, cutoff)
        }
    }

    /// Tavis–Cummings in the fundamental representation, j = 1/2.
    pub fn jaynes_cummings(
        omega: f64,
        omega0: f64,
        alpha: f64,
        beta: f64,
        xi2: f64,
        cutoff: usize,
    ) -> Self {
        Self::tavis_cummings(omega, omega0, alpha, beta, xi2, Spin::HALF, cutoff)
    }

    /// Swanson model: ω₀ = α = β = γ = δ = 0, a bare boson with j = 0.
    pub fn swanson(omega: f64, theta1: f64, theta2: f64, xi1: f64, cutoff: usize) -> Self {
        ModelParams {
            theta1,
            theta2,
            xi1,
            ..Self::free(omega, 0.0, Spin::ZERO, cutoff)
        }
    }

    /// H̃ = ωa†a + ω₀Jz + αJ₋a† + βJ₊a ± αJ₋a ± βJ₊a†, similar to the
    /// standard Dicke model with √(αβ) = λ₂/√(2j).
    pub fn dicke_nonhermitian(
        omega: f64,
        omega0: f64,
        alpha: f64,
        beta: f64,
        sign: CounterSign,
        j: Spin,
        cutoff: usize,
    ) -> Result<Self> {
        if !(alpha / beta > 0.0) {
            return Err(Error::domain(
                "dicke_nonhermitian",
                format!("alpha/beta must be positive (alpha = {alpha}, beta = {beta})"),
            ));
        }
        Ok(ModelParams {
            alpha,
            beta,
            gamma: sign.factor() * alpha,
            delta: sign.factor() * beta,
            ..Self::free(omega, omega0, j, cutoff)
        })
    }

    pub fn basis(&self) -> SpinBosonBasis {
        SpinBosonBasis::new(self.j, self.cutoff)
    }

    pub fn with_basis(mut self, j: Spin, cutoff: usize) -> Self {
        self.j = j;
        self.cutoff = cutoff;
        self
    }

    pub fn values(&self) -> [f64; 11] {
        [
            self.omega,
            self.omega0,
            self.theta1,
            self.theta2,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.xi1,
            self.xi2,
            self.xi3,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|x| x.is_finite())
    }

    /// α = β, γ = δ and θ₁ = θ₂.
    pub fn is_hermitian(&self) -> bool {
        self.alpha == self.beta && self.gamma == self.delta && self.theta1 == self.theta2
    }

    /// Ladder-term expansion of H.
    pub fn hamiltonian_terms(&self) -> OperatorSum {
        let p = self;
        let e = |x: f64| C64::from_polar(1.0, x);
        let mut h = OperatorSum::new();
        h.push(
            C64::from(p.omega),
            BosonAction::Number,
            SpinAction::Identity,
        )
        .push(
            p.theta1 * e(p.xi1),
            BosonAction::LowerTwice,
            SpinAction::Identity,
        )
        .push(
            p.theta2 * e(-p.xi1),
            BosonAction::RaiseTwice,
            SpinAction::Identity,
        )
        .push(p.alpha * e(p.xi2), BosonAction::Raise, SpinAction::Lower)
        .push(p.beta * e(-p.xi2), BosonAction::Lower, SpinAction::Raise)
        .push(p.gamma * e(p.xi3), BosonAction::Lower, SpinAction::Lower)
        .push(p.delta * e(-p.xi3), BosonAction::Raise, SpinAction::Raise)
        .push(C64::from(p.omega0), BosonAction::Identity, SpinAction::Z);
        h
    }

    /// Effective couplings of the hermitian image: sgn(x)·√(xy) for each
    /// pair (θ₁, θ₂), (α, β), (γ, δ). The sign factor keeps ℋ = ρHρ⁻¹ exact
    /// when both members of a pair are negative.
    pub fn image_couplings(&self) -> ImageCouplings {
        let pair = |x: f64, y: f64| {
            if x == 0.0 || y == 0.0 {
                0.0
            } else {
                x.signum() * (x * y).abs().sqrt()
            }
        };
        ImageCouplings {
            theta: pair(self.theta1, self.theta2),
            rotating: pair(self.alpha, self.beta),
            counter_rotating: pair(self.gamma, self.delta),
        }
    }

    /// Ladder-term expansion of ℋ from the image couplings. No validity check.
    pub fn image_terms(&self) -> OperatorSum {
        let c = self.image_couplings();
        let e = |x: f64| C64::from_polar(1.0, x);
        let mut h = OperatorSum::new();
        h.push(
            C64::from(self.omega),
            BosonAction::Number,
            SpinAction::Identity,
        )
        .push(
            c.theta * e(self.xi1),
            BosonAction::LowerTwice,
            SpinAction::Identity,
        )
        .push(
            c.theta * e(-self.xi1),
            BosonAction::RaiseTwice,
            SpinAction::Identity,
        )
        .push(
            c.rotating * e(self.xi2),
            BosonAction::Raise,
            SpinAction::Lower,
        )
        .push(
            c.rotating * e(-self.xi2),
            BosonAction::Lower,
            SpinAction::Raise,
        )
        .push(
            c.counter_rotating * e(self.xi3),
            BosonAction::Lower,
            SpinAction::Lower,
        )
        .push(
            c.counter_rotating * e(-self.xi3),
            BosonAction::Raise,
            SpinAction::Raise,
        )
        .push(C64::from(self.omega0), BosonAction::Identity, SpinAction::Z);
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageCouplings {
    pub theta: f64,
    pub rotating: f64,
    pub counter_rotating: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Full,
    NoTheta,
    NoGammaDelta,
    NoAlphaBeta,
    BosonOnly,
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub quasi_hermitian: bool,
    pub positivity_ok: bool,
    pub case_tag: CaseTag,
    pub violated_conditions: Vec<String>,
}

impl ValidationReport {
    pub fn into_result(self) -> Result<Self> {
        if self.quasi_hermitian {
            Ok(self)
        } else {
            Err(Error::InvalidParameters {
                violated: self.violated_conditions,
            })
        }
    }
}

/// Checks the conditions under which H is similar to a hermitian ℋ through a
/// positive diagonal ρ. Zero couplings exempt their ratio check; a pair with
/// exactly one zero member is rejected.
pub fn validate(p: &ModelParams) -> ValidationReport {
    let mut violated = Vec::new();
    let mut positivity_ok = true;

    if !p.is_finite() {
        violated.push("all parameters finite".to_string());
    }

    let mut pair = |x: f64, y: f64, name: &str| -> bool {
        match (x == 0.0, y == 0.0) {
            (true, true) => false,
            (false, false) => {
                if !(x / y > 0.0) {
                    positivity_ok = false;
                    violated.push(format!("{name} > 0"));
                }
                true
            }
            _ => {
                positivity_ok = false;
                violated.push(format!("{name}: both zero or both nonzero"));
                true
            }
        }
    };
    let has_theta = pair(p.theta1, p.theta2, "theta1/theta2");
    let has_ab = pair(p.alpha, p.beta, "alpha/beta");
    let has_gd = pair(p.gamma, p.delta, "gamma/delta");

    if has_theta {
        let r = p.alpha * p.delta * p.theta1 - p.beta * p.gamma * p.theta2;
        if !(r.abs() <= QUASI_HERMITICITY_TOL) {
            violated.push(format!(
                "alpha*delta*theta1 - beta*gamma*theta2 = 0 (got {r:e})"
            ));
        }
    } else {
        let r = p.alpha * p.delta - p.beta * p.gamma;
        if !(r.abs() <= QUASI_HERMITICITY_TOL) {
            violated.push(format!("alpha*delta - beta*gamma = 0 (got {r:e})"));
        }
    }

    let case_tag = if p.is_hermitian() {
        CaseTag::Hermitian
    } else if !has_theta {
        CaseTag::NoTheta
    } else {
        match (has_ab, has_gd) {
            (true, true) => CaseTag::Full,
            (true, false) => CaseTag::NoGammaDelta,
            (false, true) => CaseTag::NoAlphaBeta,
            (false, false) => CaseTag::BosonOnly,
        }
    };

    ValidationReport {
        quasi_hermitian: violated.is_empty(),
        positivity_ok,
        case_tag,
        violated_conditions: violated,
    }
}

/// Sparse H on the basis given by `p.j`, `p.cutoff`.
pub fn build_h_sparse(p: &ModelParams) -> SparseMatrix {
    p.hamiltonian_terms().sparse(&p.basis())
}

/// Dense H. Tagged hermitian exactly when α = β, γ = δ, θ₁ = θ₂.
pub fn build_h(p: &ModelParams) -> ComplexMatrix {
    let h = build_h_sparse(p).to_dense();
    if p.is_hermitian() {
        h.into_hermitian()
            .expect("hermitian parameters give a hermitian H")
    } else {
        h
    }
}

/// Sparse ℋ after checking the quasi-hermiticity conditions.
pub fn build_h_image_sparse(p: &ModelParams) -> Result<SparseMatrix> {
    validate(p).into_result()?;
    Ok(p.image_terms().sparse(&p.basis()))
}

/// Dense hermitian image ℋ; rejects parameters failing [`validate`] with the
/// violated conditions named.
pub fn build_h_image(p: &ModelParams) -> Result<ComplexMatrix> {
    build_h_image_sparse(p)?.to_dense().into_hermitian()
}
