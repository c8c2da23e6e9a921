//! Exactly solvable limits.
//!
//! A Bogoliubov rotation a = cosh t·b − e^{iφ} sinh t·b† removes the a², a†²
//! terms of ℋ. When the counter-rotating couplings are tied to the rotating
//! ones (see [`tc_constraint`]) the result is a Tavis–Cummings Hamiltonian
//!
//!   ℋ = Ω b†b + ω₀Jz + Ω₁(e^{iξ₂}J₋b† + e^{−iξ₂}J₊b) + Ω₀,
//!
//! which conserves K = b†b + Jz and splits into blocks of size at most 2j+1.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{
    boson_element, spin_element, BosonAction, OperatorSum, Spin, SpinAction, SpinBosonBasis,
};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{diagonalize_hermitian_with, ComplexMatrix, C64};

/// Relative tolerance on the identity Ω = √(ω² − 4θ₁θ₂).
const OMEGA_IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovReduction {
    /// Phase of the Bogoliubov rotation.
    pub phi: f64,
    /// Rotation rapidity t, with tanh t = Δ/(2√(θ₁θ₂)).
    pub theta_b: f64,
    /// Δ = ω − √(ω² − 4θ₁θ₂).
    pub big_delta: f64,
    /// Ω, the b-mode frequency.
    pub big_omega: f64,
    /// Ω₀ = −Δ/2, the constant shift.
    pub big_omega0: f64,
    /// Ω₁, the rotating coupling of the b-mode. Carries the sign of α.
    pub big_omega1: f64,
    /// ω₀ and ξ₂ carried over unchanged.
    pub omega0: f64,
    pub xi2: f64,
}

fn same_sign_pair(x: f64, y: f64) -> bool {
    (x == 0.0 && y == 0.0) || x / y > 0.0
}

/// Bogoliubov data for the hermitian image of `p`. Uses the branch
/// Δ = ω − √(ω² − 4θ₁θ₂); the other root of the quadratic makes
/// |tanh t| > 1 and is never produced.
///
/// γ, δ and ξ₃ are ignored: the image is of Tavis–Cummings form only if
/// they satisfy [`tc_constraint`].
pub fn reduce(p: &ModelParams) -> Result<BogoliubovReduction> {
    const OP: &str = "reduce";
    if !p.is_finite() {
        return Err(Error::domain(OP, "parameters must be finite"));
    }
    if !(p.omega > 0.0) {
        return Err(Error::domain(
            OP,
            format!("omega must be positive (got {})", p.omega),
        ));
    }
    if !same_sign_pair(p.theta1, p.theta2) {
        return Err(Error::domain(
            OP,
            "theta1 and theta2 must both vanish or have the same sign",
        ));
    }
    if !same_sign_pair(p.alpha, p.beta) {
        return Err(Error::domain(
            OP,
            "alpha and beta must both vanish or have the same sign",
        ));
    }
    let tt = p.theta1 * p.theta2;
    let disc = p.omega * p.omega - 4.0 * tt;
    if !(disc > 0.0) {
        return Err(Error::domain(
            OP,
            format!("omega^2 - 4 theta1 theta2 must be positive (got {disc:e}); no real Bogoliubov angle"),
        ));
    }
    let s = disc.sqrt();
    let g = tt.sqrt();
    // Δ = ω − s = 4θ₁θ₂/(ω + s), without the cancellation.
    let big_delta = 4.0 * tt / (p.omega + s);
    // 4θ₁θ₂ − ωΔ = 4θ₁θ₂·s/(ω + s).
    let gap = 4.0 * tt * s / (p.omega + s);
    let big_omega = if tt == 0.0 {
        p.omega
    } else {
        disc * big_delta / gap
    };
    if ((big_omega - s) / s).abs() > OMEGA_IDENTITY_TOL {
        return Err(Error::ContractViolation(format!(
            "Bogoliubov frequency {big_omega} differs from sqrt(omega^2 - 4 theta1 theta2) = {s}"
        )));
    }
    let tanh_t = 2.0 * g / (p.omega + s);
    let rotating = p.image_couplings().rotating;
    let big_omega1 = rotating * (2.0 * s / (p.omega + s)).sqrt();
    let phi = if p.theta1 < 0.0 { -p.xi1 - PI } else { -p.xi1 };
    Ok(BogoliubovReduction {
        phi,
        theta_b: tanh_t.atanh(),
        big_delta,
        big_omega,
        big_omega0: -big_delta / 2.0,
        big_omega1,
        omega0: p.omega0,
        xi2: p.xi2,
    })
}

/// (γ, δ, ξ₃) = (αΔ/(2θ₂), βΔ/(2θ₁), ξ₁ + ξ₂): the counter-rotating couplings
/// for which the Bogoliubov image of ℋ has no counter-rotating terms.
pub fn tc_constraint(p: &ModelParams) -> Result<(f64, f64, f64)> {
    if p.theta1 == 0.0 || p.theta2 == 0.0 || p.alpha == 0.0 || p.beta == 0.0 {
        return Err(Error::domain(
            "tc_constraint",
            "theta1, theta2, alpha and beta must all be nonzero",
        ));
    }
    let red = reduce(p)?;
    let gamma = p.alpha * red.big_delta / (2.0 * p.theta2);
    let delta = p.beta * red.big_delta / (2.0 * p.theta1);
    let defect = p.alpha * delta * p.theta1 - p.beta * gamma * p.theta2;
    debug_assert!(defect.abs() <= 1e-12 * (p.alpha * delta * p.theta1).abs().max(1.0));
    Ok((gamma, delta, p.xi1 + p.xi2))
}

/// `p` with γ, δ, ξ₃ replaced by the values from [`tc_constraint`].
pub fn with_tc_constraint(p: &ModelParams) -> Result<ModelParams> {
    let (gamma, delta, xi3) = tc_constraint(p)?;
    Ok(ModelParams {
        gamma,
        delta,
        xi3,
        ..*p
    })
}

/// Coefficients of the image ℋ rewritten in b, b† after the rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformedCoefficients {
    pub b_b: C64,
    pub bdag_bdag: C64,
    pub bdag_b: C64,
    pub constant: C64,
    pub jminus_b: C64,
    pub jminus_bdag: C64,
    pub jplus_b: C64,
    pub jplus_bdag: C64,
}

/// Substitutes a = u b + v b† (u = cosh t, v = −e^{iφ} sinh t) into the
/// image of `p` and collects coefficients. Independent of the closed forms
/// in [`reduce`] apart from t and φ.
pub fn transformed_coefficients(
    p: &ModelParams,
    red: &BogoliubovReduction,
) -> TransformedCoefficients {
    let c = p.image_couplings();
    let e = |x: f64| C64::from_polar(1.0, x);
    let w = C64::from(p.omega);
    let pp = c.theta * e(p.xi1);
    let r = c.rotating * e(p.xi2);
    let cc = c.counter_rotating * e(p.xi3);
    let u = C64::from(red.theta_b.cosh());
    let v = -e(red.phi) * red.theta_b.sinh();
    TransformedCoefficients {
        b_b: w * v.conj() * u + pp * u * u + pp.conj() * v.conj() * v.conj(),
        bdag_bdag: w * u.conj() * v + pp * v * v + pp.conj() * u.conj() * u.conj(),
        bdag_b: w * (u.norm_sqr() + v.norm_sqr())
            + 2.0 * pp * u * v
            + 2.0 * pp.conj() * v.conj() * u.conj(),
        constant: w * v.norm_sqr() + pp * u * v + pp.conj() * v.conj() * u.conj(),
        jminus_b: r * v.conj() + cc * u,
        jminus_bdag: r * u.conj() + cc * v,
        jplus_b: r.conj() * u + cc.conj() * v.conj(),
        jplus_bdag: r.conj() * v + cc.conj() * u.conj(),
    }
}

/// Dense reduced Hamiltonian on the b-mode basis.
pub fn tc_hamiltonian(red: &BogoliubovReduction, basis: SpinBosonBasis) -> ComplexMatrix {
    let mut h = OperatorSum::new();
    h.push(
        C64::from(red.big_omega),
        BosonAction::Number,
        SpinAction::Identity,
    )
    .push(C64::from(red.omega0), BosonAction::Identity, SpinAction::Z)
    .push(
        red.big_omega1 * C64::from_polar(1.0, red.xi2),
        BosonAction::Raise,
        SpinAction::Lower,
    )
    .push(
        red.big_omega1 * C64::from_polar(1.0, -red.xi2),
        BosonAction::Lower,
        SpinAction::Raise,
    )
    .push(
        C64::from(red.big_omega0),
        BosonAction::Identity,
        SpinAction::Identity,
    );
    h.dense(&basis)
        .into_hermitian()
        .expect("reduced Hamiltonian is hermitian")
}

/// K = b†b + Jz.
pub fn k_operator(basis: SpinBosonBasis) -> ComplexMatrix {
    let mut k = OperatorSum::new();
    k.push(C64::from(1.0), BosonAction::Number, SpinAction::Identity)
        .push(C64::from(1.0), BosonAction::Identity, SpinAction::Z);
    k.dense(&basis)
}

/// Ω₁L = ℋ − ΩK − Ω₀ = (ω₀ − Ω)Jz + Ω₁(e^{iξ₂}J₋b† + e^{−iξ₂}J₊b).
pub fn l_operator(red: &BogoliubovReduction, basis: SpinBosonBasis) -> ComplexMatrix {
    let mut l = OperatorSum::new();
    l.push(
        C64::from(red.omega0 - red.big_omega),
        BosonAction::Identity,
        SpinAction::Z,
    )
    .push(
        red.big_omega1 * C64::from_polar(1.0, red.xi2),
        BosonAction::Raise,
        SpinAction::Lower,
    )
    .push(
        red.big_omega1 * C64::from_polar(1.0, -red.xi2),
        BosonAction::Lower,
        SpinAction::Raise,
    );
    l.dense(&basis)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TCBlockSolution {
    /// Eigenvalue k of K.
    pub k_value: f64,
    /// n + m = k + j.
    pub excitation: usize,
    pub dimension: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

/// States (n, m) of the block with n + m = `excitation`, ordered by m.
pub fn block_states(spin: Spin, excitation: usize) -> Vec<(usize, usize)> {
    let top = (spin.twice() as usize).min(excitation);
    (0..=top).map(|m| (excitation - m, m)).collect()
}

/// The reduced Hamiltonian restricted to one K block.
pub fn block_matrix(red: &BogoliubovReduction, spin: Spin, excitation: usize) -> ComplexMatrix {
    let states = block_states(spin, excitation);
    let j = spin.value();
    let mut h = ComplexMatrix::zeros(states.len(), states.len());
    let hop = red.big_omega1 * C64::from_polar(1.0, -red.xi2);
    for (col, &(n, m)) in states.iter().enumerate() {
        h[(col, col)] =
            C64::from(red.big_omega * n as f64 + red.omega0 * (m as f64 - j) + red.big_omega0);
        // J₊b: (n, m) → (n − 1, m + 1), the next state in the block.
        let b = boson_element(BosonAction::Lower, n, usize::MAX);
        let s = spin_element(SpinAction::Raise, m, spin);
        if let (Some((_, bamp)), Some((_, samp))) = (b, s) {
            let v = hop * (bamp * samp);
            h[(col + 1, col)] = v;
            h[(col, col + 1)] = v.conj();
        }
    }
    h
}

/// Eigenvalues of every K block with −j ≤ k ≤ `k_max`, in ascending k.
pub fn exact_spectrum(
    red: &BogoliubovReduction,
    spin: Spin,
    k_max: f64,
) -> Result<Vec<TCBlockSolution>> {
    let j = spin.value();
    if !(k_max >= -j) {
        return Ok(Vec::new());
    }
    let e_max = (k_max + j + 1e-9).floor() as usize;
    (0..=e_max)
        .into_par_iter()
        .map(|e| {
            let h = block_matrix(red, spin, e);
            let s = diagonalize_hermitian_with(&h, false)?;
            Ok(TCBlockSolution {
                k_value: e as f64 - j,
                excitation: e,
                dimension: h.rows(),
                eigenvalues: s.real_parts(),
            })
        })
        .collect()
}

/// Default block range for a cutoff: k_max = N − 2j.
pub fn default_k_max(spin: Spin, cutoff: usize) -> f64 {
    cutoff as f64 - spin.twice() as f64
}

/// Eₙ = −ω/2 + √(ω² − 4θ₁θ₂)(n + ½), n = 0..=n_max.
pub fn swanson_spectrum(omega: f64, theta1: f64, theta2: f64, n_max: usize) -> Result<Vec<f64>> {
    let red = reduce(&ModelParams::swanson(omega, theta1, theta2, 0.0, 0))?;
    Ok((0..=n_max)
        .map(|n| red.big_omega0 + red.big_omega * n as f64)
        .collect())
}
