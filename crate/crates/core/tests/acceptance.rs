//! Acceptance suite. Runs without the libtest harness so that one line per
//! criterion is always printed; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dicke_core::basis::{Spin, SpinBosonBasis};
use dicke_core::exact::{
    exact_spectrum, reduce, tc_hamiltonian, transformed_coefficients, with_tc_constraint,
};
use dicke_core::metric::{build_metric, pseudo_hermiticity_residual};
use dicke_core::model::{build_h, build_h_sparse, CounterSign, ModelParams};
use dicke_core::numerics::{diagonalize_general, diagonalize_hermitian};
use dicke_core::qpt::{
    analytic_order_params_dicke, analytic_order_params_general, finite_j_order_params, scan,
    tc_order_params, CutoffPolicy, Route, ScanRecord, SweepParam, SweepSpec,
};
use dicke_core::spectral::{compare_spectra, h_eigenbasis, h_spectrum, parity_expectations};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_sets() -> Vec<ModelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1c4e);
    (0..100)
        .map(|_| common::random_valid_params(&mut rng, 4, 24))
        .collect()
}

fn pseudo_hermiticity(sets: &[ModelParams]) -> Outcome {
    let start = Instant::now();
    let (mut residual, mut defect) = (0.0f64, 0.0f64);
    let mut ok = true;
    for p in sets {
        let h = build_h(p);
        let r = pseudo_hermiticity_residual(&build_metric(p).unwrap(), &h).unwrap();
        let c = compare_spectra(p).unwrap();
        let d = c.relative_reality_defect();
        ok &= r <= 1e-10 && c.reality_defect <= 1e-7 * c.norm_h;
        residual = residual.max(r);
        defect = defect.max(d);
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    outcome(
        ok,
        format!(
            "100 sets, max residual {residual:.2e} (limit 1e-10), max |Im|/|H| {defect:.2e} (limit 1e-7), {:.1} s (limit 30 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn similarity_equivalence(sets: &[ModelParams]) -> Outcome {
    let mut worst = 0.0f64;
    for p in sets {
        let c = compare_spectra(p).unwrap();
        let scale = c
            .spectrum_image
            .eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(1.0f64, f64::max);
        worst = worst.max(c.max_pairwise_gap / scale);
    }
    outcome(
        worst <= 1e-7,
        format!("100 sets, max sorted gap / max|E| {worst:.2e} (limit 1e-7)"),
    )
}

fn swanson_oracle() -> Outcome {
    let start = Instant::now();
    let exact: Vec<f64> = (0..20)
        .map(|n| -1.0 + 3f64.sqrt() * (n as f64 + 0.5))
        .collect();
    let mut worst = 0.0f64;
    // The hermitian point and a non-hermitian one with the same θ₁θ₂.
    for (t1, t2) in [(0.5, 0.5), (0.25, 1.0)] {
        let p = ModelParams::swanson(2.0, t1, t2, 0.0, 80);
        let s = h_spectrum(&p, false).unwrap();
        for (z, e) in s.eigenvalues.iter().zip(&exact) {
            worst = worst.max((z - e).norm());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-6 && elapsed < Duration::from_secs(5),
        format!(
            "lowest 20 levels, max error {worst:.2e} (limit 1e-6), {:.2} s (limit 5 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn exact_tc() -> Outcome {
    let (mut level_err, mut counter) = (0.0f64, 0.0f64);
    let mut blocks = 0;
    let params = [
        (1.4, 0.9, 0.25, 0.4, 0.3, 0.55),
        (1.0, 1.3, 0.1, 0.05, 0.8, 0.2),
        (2.0, 0.5, -0.3, -0.6, 0.4, 0.4),
    ];
    for twice in [1, 2, 4] {
        let spin = Spin::from_twice(twice);
        for &(omega, omega0, theta1, theta2, alpha, beta) in &params {
            let p = with_tc_constraint(&ModelParams {
                omega,
                omega0,
                theta1,
                theta2,
                alpha,
                beta,
                xi1: 0.7,
                xi2: -0.4,
                j: spin,
                cutoff: 16,
                ..ModelParams::default()
            })
            .unwrap();
            let red = reduce(&p).unwrap();
            let c = transformed_coefficients(&p, &red);
            for z in [c.b_b, c.bdag_bdag, c.jminus_b, c.jplus_bdag] {
                counter = counter.max(z.norm());
            }
            let basis = SpinBosonBasis::new(spin, 16);
            let dense = tc_hamiltonian(&red, basis);
            for block in exact_spectrum(&red, spin, 12.0).unwrap() {
                let idx: Vec<usize> = basis
                    .states()
                    .filter(|&(_, n, m)| n + m == block.excitation)
                    .map(|(i, _, _)| i)
                    .collect();
                let s = diagonalize_hermitian(&dense.submatrix(&idx)).unwrap();
                if s.len() != block.dimension {
                    level_err = f64::INFINITY;
                }
                for (a, b) in s.real_parts().iter().zip(&block.eigenvalues) {
                    level_err = level_err.max((a - b).abs());
                }
                blocks += 1;
            }
        }
    }
    outcome(
        level_err <= 1e-9 && counter <= 1e-12,
        format!(
            "{blocks} blocks, max level error {level_err:.2e} (limit 1e-9), max counter-rotating coefficient {counter:.2e} (limit 1e-12)"
        ),
    )
}

fn qpt_reproduction() -> Outcome {
    let start = Instant::now();
    let target = -0.25;
    let policy = CutoffPolicy {
        cap: 256,
        ..CutoffPolicy::default()
    };
    let mut errors = Vec::new();
    let mut cutoffs = Vec::new();
    for twice in [8, 16, 32] {
        let p = ModelParams::standard_dicke(1.0, 1.0, 1.0, Spin::from_twice(twice), 16).unwrap();
        let r = finite_j_order_params(&p, policy, Route::Image).unwrap();
        errors.push((r.jz_over_j - target).abs());
        cutoffs.push(r.cutoff);
    }
    let elapsed = start.elapsed();
    let ok = errors[2] < 0.1
        && errors[2] < errors[1]
        && errors[1] < errors[0]
        && elapsed < Duration::from_secs(120);
    outcome(
        ok,
        format!(
            "|jz/j + 0.25| at j = 4, 8, 16: {:.4}, {:.4}, {:.4} (cutoffs {:?}), {:.1} s (limit 120 s)",
            errors[0],
            errors[1],
            errors[2],
            cutoffs,
            elapsed.as_secs_f64()
        ),
    )
}

fn record_gap(a: &ScanRecord, b: &ScanRecord) -> f64 {
    let fields = |r: &ScanRecord| {
        [
            r.coupling,
            r.jz_over_j,
            r.n_over_j,
            r.e0_over_j,
            r.analytic_jz,
            r.analytic_n,
        ]
    };
    let same_meta = a.j == b.j && a.cutoff == b.cutoff && a.converged == b.converged;
    if !same_meta || a.failure.is_some() || b.failure.is_some() {
        return f64::INFINITY;
    }
    fields(a)
        .iter()
        .zip(fields(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn nonhermitian_dicke_equivalence() -> Outcome {
    let sweep = SweepSpec {
        param: SweepParam::Lambda2,
        start: 0.1,
        stop: 1.5,
        steps: 8,
        j_list: vec![
            Spin::from_twice(2),
            Spin::from_twice(4),
            Spin::from_twice(8),
        ],
    };
    let policy = CutoffPolicy::default();
    let hermitian = ModelParams::standard_dicke(1.0, 1.0, 1.0, Spin::HALF, 16).unwrap();
    let reference = scan(&hermitian, &sweep, policy, Route::Image).unwrap();
    let mut worst = 0.0f64;
    let mut rows = 0;
    for sign in [CounterSign::Plus, CounterSign::Minus] {
        let base =
            ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0, 0.5, sign, Spin::HALF, 16).unwrap();
        for (a, b) in scan(&base, &sweep, policy, Route::Image)
            .unwrap()
            .iter()
            .zip(&reference)
        {
            worst = worst.max(record_gap(a, b));
            rows += 1;
        }
    }
    // Direct route: general solver on H and η-expectations, fixed cutoff.
    let small = SweepSpec {
        j_list: vec![Spin::from_twice(2), Spin::from_twice(4)],
        steps: 4,
        ..sweep
    };
    let fixed = CutoffPolicy::fixed(40);
    let reference = scan(&hermitian, &small, fixed, Route::Image).unwrap();
    let base =
        ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0, 0.5, CounterSign::Plus, Spin::HALF, 16)
            .unwrap();
    let mut worst_direct = 0.0f64;
    for (a, b) in scan(&base, &small, fixed, Route::Direct)
        .unwrap()
        .iter()
        .zip(&reference)
    {
        worst_direct = worst_direct.max(record_gap(a, b));
        rows += 1;
    }
    outcome(
        worst <= 1e-8 && worst_direct <= 1e-8,
        format!(
            "{rows} records, max deviation via image {worst:.2e}, via direct solve {worst_direct:.2e} (limit 1e-8)"
        ),
    )
}

fn general_mu_reduction() -> Outcome {
    let (omega, omega0) = (1.2, 0.8);
    let j = Spin::from_twice(6);
    let norm = (2.0 * j.value()).sqrt();
    let mut dicke_err = 0.0f64;
    let mut tc_err = 0.0f64;
    for k in 1..=100 {
        let lambda = 0.02 * k as f64;
        let d = ModelParams::standard_dicke(omega, omega0, lambda, j, 4).unwrap();
        let (g, _) = analytic_order_params_general(&d).unwrap();
        let o = analytic_order_params_dicke(omega, omega0, lambda);
        dicke_err = dicke_err
            .max((g.jz_over_j - o.jz_over_j).abs())
            .max((g.n_over_j - o.n_over_j).abs());

        let g1 = lambda / norm;
        let t = ModelParams::tavis_cummings(omega, omega0, 2.0 * g1, 0.5 * g1, 0.3, j, 4);
        let (g, _) = analytic_order_params_general(&t).unwrap();
        let o = tc_order_params(omega, omega0, lambda);
        tc_err = tc_err
            .max((g.jz_over_j - o.jz_over_j).abs())
            .max((g.n_over_j - o.n_over_j).abs());
    }
    outcome(
        dicke_err <= 1e-12 && tc_err <= 1e-12,
        format!("100-point grid, max deviation from Dicke {dicke_err:.2e}, from TC {tc_err:.2e} (limit 1e-12)"),
    )
}

fn parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbadc0de);
    let mut models: Vec<ModelParams> = (0..30)
        .map(|_| common::random_valid_params(&mut rng, 4, 10))
        .collect();
    let j = Spin::from_twice(3);
    models.extend([
        ModelParams::standard_dicke(1.0, 1.0, 0.9, j, 10).unwrap(),
        ModelParams::tavis_cummings(1.0, 0.7, 0.3, 0.6, 0.2, j, 10),
        ModelParams::jaynes_cummings(1.0, 0.7, 0.3, 0.6, 0.2, 10),
        ModelParams::swanson(2.0, 0.25, 1.0, 0.4, 20),
        ModelParams::dicke_nonhermitian(1.0, 1.0, 2.0, 0.5, CounterSign::Minus, j, 10).unwrap(),
        ModelParams::ddm(1.0, 1.0, 0.1, 0.2, 0.3, [0.1, 0.2, 0.3], j, 10),
    ]);
    let mut commutator = 0.0f64;
    let mut parity_err = 0.0f64;
    let mut states = 0;
    let mut full_checked = 0;
    for p in &models {
        let basis = p.basis();
        let h = build_h(p);
        let pi = basis.parity();
        commutator = commutator.max(
            h.matmul(&pi)
                .unwrap()
                .sub(&pi.matmul(&h).unwrap())
                .unwrap()
                .max_abs(),
        );

        let s = h_spectrum(p, true).unwrap();
        let mut vecs = vec![s.eigenvectors.clone().unwrap()];
        vecs.push(h_eigenbasis(p, &build_metric(p).unwrap()).unwrap().states);
        // Full-matrix solve without sector splitting, when no two levels are
        // close enough for the solver to mix them.
        let full = diagonalize_general(&build_h(p)).unwrap();
        let min_gap = full
            .eigenvalues
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(f64::INFINITY, f64::min);
        if min_gap > 1e-6 * build_h_sparse(p).max_abs() {
            vecs.push(full.eigenvectors.unwrap());
            full_checked += 1;
        }
        for v in &vecs {
            for x in parity_expectations(basis, v) {
                parity_err = parity_err.max((x.abs() - 1.0).abs());
                states += 1;
            }
        }
    }
    outcome(
        commutator == 0.0 && parity_err <= 1e-8,
        format!(
            "{} models, max |[H, P]| {commutator:e} (limit 0), {states} eigenstates ({full_checked} models also solved unsplit), max ||<P>| - 1| {parity_err:.2e} (limit 1e-8)",
            models.len()
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let sets = random_sets();
    let criteria: Vec<Criterion> = vec![
        ("pseudo-hermiticity", Box::new(|| pseudo_hermiticity(&sets))),
        (
            "similarity equivalence",
            Box::new(|| similarity_equivalence(&sets)),
        ),
        ("Swanson oracle", Box::new(swanson_oracle)),
        ("exact Tavis-Cummings solution", Box::new(exact_tc)),
        (
            "QPT reproduction in the Dicke limit",
            Box::new(qpt_reproduction),
        ),
        (
            "non-hermitian Dicke equivalence",
            Box::new(nonhermitian_dicke_equivalence),
        ),
        ("general mu criterion", Box::new(general_mu_reduction)),
        ("parity", Box::new(parity)),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("acceptance {} {verdict}: {name}: {}", k + 1, o.detail);
        failures += usize::from(!o.pass);
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {failures} of {} criteria failed",
            criteria.len()
        );
        ExitCode::FAILURE
    }
}
