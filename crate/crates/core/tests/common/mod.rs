#![allow(dead_code)]

use std::f64::consts::PI;

use dicke_core::basis::Spin;
use dicke_core::model::ModelParams;
use rand::Rng;

/// Log-uniform ratio in [e⁻², e²].
fn ratio<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-2.0f64..=2.0).exp()
}

fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.2) {
        -1.0
    } else {
        1.0
    }
}

/// (x, y) with x/y = `r` and geometric mean `g`.
fn pair(g: f64, r: f64, s: f64) -> (f64, f64) {
    (s * g * r.sqrt(), s * g / r.sqrt())
}

/// Quasi-hermitian parameters covering every case of the metric: full,
/// no theta, boson only, no (γ, δ), no (α, β) and hermitian. Every coupling
/// ratio lies in [e⁻², e²].
pub fn random_valid_params<R: Rng>(rng: &mut R, max_twice_j: u32, cutoff: usize) -> ModelParams {
    let omega = rng.gen_range(0.5..2.0);
    let mut p = ModelParams {
        omega,
        omega0: rng.gen_range(0.5..2.0),
        xi1: rng.gen_range(-PI..PI),
        xi2: rng.gen_range(-PI..PI),
        xi3: rng.gen_range(-PI..PI),
        j: Spin::from_twice(rng.gen_range(1..=max_twice_j)),
        cutoff,
        ..ModelParams::default()
    };
    let case = rng.gen_range(0..6);
    let g_theta = rng.gen_range(0.05..0.4) * omega;
    let mut g = || rng.gen_range(0.05..1.0);
    let (ga, gc) = (g(), g());
    loop {
        let (rt, ra) = (ratio(rng), ratio(rng));
        // θ₁/θ₂ = rt and α/β = ra force γ/δ = ra·rt when θ ≠ 0.
        let rc = if case == 1 { ra } else { ra * rt };
        if !(-2.0..=2.0).contains(&rc.ln()) && matches!(case, 0 | 1) {
            continue;
        }
        let (st, sa) = (sign(rng), sign(rng));
        let (sc, rc_free) = (sign(rng), ratio(rng));
        match case {
            0 => {
                (p.theta1, p.theta2) = pair(g_theta, rt, st);
                (p.alpha, p.beta) = pair(ga, ra, sa);
                (p.gamma, p.delta) = pair(gc, rc, sc);
            }
            1 => {
                (p.alpha, p.beta) = pair(ga, ra, sa);
                (p.gamma, p.delta) = pair(gc, rc, sc);
            }
            2 => (p.theta1, p.theta2) = pair(g_theta, rt, st),
            3 => {
                (p.theta1, p.theta2) = pair(g_theta, rt, st);
                (p.alpha, p.beta) = pair(ga, ra, sa);
            }
            4 => {
                (p.theta1, p.theta2) = pair(g_theta, rt, st);
                (p.gamma, p.delta) = pair(gc, rc_free, sc);
            }
            _ => {
                (p.theta1, p.theta2) = (g_theta, g_theta);
                (p.alpha, p.beta) = (ga, ga);
                (p.gamma, p.delta) = (gc, gc);
            }
        }
        break;
    }
    if case == 0 {
        // Close αδθ₁ = βγθ₂ exactly: δ = βγθ₂/(αθ₁).
        p.delta = p.beta * p.gamma * p.theta2 / (p.alpha * p.theta1);
    }
    p
}
