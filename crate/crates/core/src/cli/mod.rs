//! `dicke` command line: one command per invocation, configured by a flat
//! key/value file plus `--set` overrides.
//!
//! Exit codes: 0 success, 2 invalid configuration or i/o, 3 invalid model
//! parameters, 4 numerical failure. Failures print a JSON object
//! `{error, message, exit_code}` on stderr.

pub mod config;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{default_k_max, exact_spectrum, reduce, swanson_spectrum, tc_constraint};
use crate::metric::{build_metric, pseudo_hermiticity_residual};
use crate::model::{build_h, validate, CaseTag};
use crate::numerics::C64;
use crate::qpt::{scan, SweepParam};
use crate::spectral::{compare_spectra, h_eigenbasis, h_spectrum};

pub use config::{Command, Format, RunConfig};
use output::{float, json, scan_csv, table_csv};
use plot::{write_plot, PlotOptions};

#[derive(Debug, Parser)]
#[command(
    name = "dicke",
    version,
    about = "Pseudo-hermitian spin-boson model toolkit"
)]
struct Args {
    /// validate | spectrum | metric-check | exact | scan
    #[arg(value_enum)]
    command: Option<Command>,
    /// Configuration file of `key = value` lines.
    #[arg(short, long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one key; repeatable.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file (stdout if absent).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// SVG plot of a scan.
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) | Error::InvalidBasis(_) => 2,
        Error::InvalidParameters { .. } | Error::Domain { .. } => 3,
        Error::MetricOverflow { .. }
        | Error::NoConvergence { .. }
        | Error::ContractViolation(_)
        | Error::ShapeMismatch { .. }
        | Error::ZeroVector => 4,
    }
}

fn error_json(e: &Error) -> String {
    serde_json::json!({
        "error": e.kind(),
        "message": e.to_string(),
        "exit_code": exit_code(e),
    })
    .to_string()
}

/// File first, then `--set` overrides, then the dedicated flags.
fn resolve_args(args: Args) -> Result<RunConfig> {
    let mut pairs = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            config::parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    for s in &args.set {
        pairs.push(config::parse_assignment(s)?);
    }
    if let Some(p) = &args.output {
        pairs.push(("output.path".into(), p.display().to_string()));
    }
    if let Some(f) = args.format {
        let name = if f == Format::Csv { "csv" } else { "json" };
        pairs.push(("output.format".into(), name.into()));
    }
    if let Some(p) = &args.plot {
        pairs.push(("plot.path".into(), p.display().to_string()));
    }
    RunConfig::from_pairs(args.command, &pairs)
}

/// Full invocation with explicit streams. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = Error::Config(e.to_string().trim().to_string());
            let _ = writeln!(stderr, "{}", error_json(&err));
            return 2;
        }
    };
    let result = resolve_args(args).and_then(|cfg| execute(&cfg, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_json(&e));
            exit_code(&e)
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn emit(cfg: &RunConfig, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.output_path {
        Some(path) => {
            write_file(path, body)?;
            write_file(&resolved_path(path), &cfg.to_text())
        }
        None => stdout.write_all(body.as_bytes()).map_err(Error::from),
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `out.csv` → `out.resolved.cfg`.
pub fn resolved_path(output: &Path) -> PathBuf {
    output.with_extension("resolved.cfg")
}

/// Runs the configured command, writing its primary output.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Validate => cmd_validate(cfg, stdout),
        Command::Spectrum => cmd_spectrum(cfg, stdout),
        Command::MetricCheck => cmd_metric_check(cfg, stdout),
        Command::Exact => cmd_exact(cfg, stdout),
        Command::Scan => cmd_scan(cfg, stdout),
    }
}

fn cmd_validate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let report = validate(&cfg.params);
    let body = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => table_csv(
            &[
                "quasi_hermitian",
                "positivity_ok",
                "case_tag",
                "violated_conditions",
            ],
            &[vec![
                report.quasi_hermitian.to_string(),
                report.positivity_ok.to_string(),
                case_name(report.case_tag).into(),
                format!("\"{}\"", report.violated_conditions.join("; ")),
            ]],
        ),
    };
    emit(cfg, &body, stdout)?;
    report.into_result().map(|_| ())
}

fn case_name(tag: CaseTag) -> &'static str {
    match tag {
        CaseTag::Full => "full",
        CaseTag::NoTheta => "no_theta",
        CaseTag::NoGammaDelta => "no_gamma_delta",
        CaseTag::NoAlphaBeta => "no_alpha_beta",
        CaseTag::BosonOnly => "boson_only",
        CaseTag::Hermitian => "hermitian",
    }
}

#[derive(Serialize)]
struct SpectrumOutput {
    dimension: usize,
    case_tag: CaseTag,
    is_real: bool,
    reality_tolerance: f64,
    reality_defect: f64,
    relative_reality_defect: f64,
    max_pairwise_gap: f64,
    relative_gap: f64,
    norm_h: f64,
    norm_image: f64,
    eigenvalues_h: Vec<C64>,
    eigenvalues_image: Vec<f64>,
}

fn cmd_spectrum(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let report = validate(&cfg.params).into_result()?;
    let cmp = compare_spectra(&cfg.params)?;
    let tol = cfg
        .tolerances
        .reality
        .unwrap_or(cmp.spectrum_h.reality_tolerance);
    let body = match cfg.format {
        Format::Json => json(&SpectrumOutput {
            dimension: cmp.spectrum_h.len(),
            case_tag: report.case_tag,
            is_real: cmp.reality_defect <= tol,
            reality_tolerance: tol,
            reality_defect: cmp.reality_defect,
            relative_reality_defect: cmp.relative_reality_defect(),
            max_pairwise_gap: cmp.max_pairwise_gap,
            relative_gap: cmp.relative_gap(),
            norm_h: cmp.norm_h,
            norm_image: cmp.norm_image,
            eigenvalues_h: cmp.spectrum_h.eigenvalues.clone(),
            eigenvalues_image: cmp.spectrum_image.real_parts(),
        }),
        Format::Csv => {
            let rows: Vec<Vec<String>> = cmp
                .spectrum_h
                .eigenvalues
                .iter()
                .zip(&cmp.spectrum_image.eigenvalues)
                .enumerate()
                .map(|(i, (h, im))| vec![i.to_string(), float(h.re), float(h.im), float(im.re)])
                .collect();
            table_csv(&["index", "h_re", "h_im", "image"], &rows)
        }
    };
    emit(cfg, &body, stdout)
}

#[derive(Serialize)]
struct MetricOutput {
    case_tag: CaseTag,
    dimension: usize,
    c_boson: f64,
    c_spin: f64,
    rho_min: f64,
    rho_max: f64,
    pseudo_hermiticity_residual: f64,
    eta_gram_defect: f64,
}

fn cmd_metric_check(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let p = &cfg.params;
    let report = validate(p).into_result()?;
    let mf = build_metric(p)?;
    let residual = pseudo_hermiticity_residual(&mf, &build_h(p))?;
    let eb = h_eigenbasis(p, &mf)?;
    let gram = mf.eta_gram(&eb.states)?;
    let n = gram.rows();
    let mut defect: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            defect = defect.max((gram[(r, c)] - target).norm());
        }
    }
    let rho = mf.rho_diag();
    let out = MetricOutput {
        case_tag: report.case_tag,
        dimension: n,
        c_boson: mf.c_boson(),
        c_spin: mf.c_spin(),
        rho_min: rho.iter().copied().fold(f64::INFINITY, f64::min),
        rho_max: rho.iter().copied().fold(0.0, f64::max),
        pseudo_hermiticity_residual: residual,
        eta_gram_defect: defect,
    };
    let body = match cfg.format {
        Format::Json => json(&out),
        Format::Csv => table_csv(
            &[
                "case_tag",
                "dimension",
                "c_boson",
                "c_spin",
                "rho_min",
                "rho_max",
                "pseudo_hermiticity_residual",
                "eta_gram_defect",
            ],
            &[vec![
                case_name(out.case_tag).into(),
                n.to_string(),
                float(out.c_boson),
                float(out.c_spin),
                float(out.rho_min),
                float(out.rho_max),
                float(residual),
                float(defect),
            ]],
        ),
    };
    emit(cfg, &body, stdout)
}

#[derive(Debug, Serialize)]
struct LevelRow {
    index: usize,
    /// K eigenvalue (rotating-wave model) or boson number (boson-only model).
    label: f64,
    exact: f64,
    dense: f64,
    difference: f64,
}

#[derive(Serialize)]
struct ExactOutput {
    model: &'static str,
    k_max: f64,
    max_difference: f64,
    levels: Vec<LevelRow>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs()))
}

struct ExactLevels {
    model: &'static str,
    k_max: f64,
    /// (label, energy)
    levels: Vec<(f64, f64)>,
    /// Energy below which `levels` is complete.
    bound: f64,
}

fn exact_levels(cfg: &RunConfig) -> Result<ExactLevels> {
    let p = &cfg.params;
    let spin_free = p.alpha == 0.0 && p.beta == 0.0 && p.gamma == 0.0 && p.delta == 0.0;
    let two_j = p.j.twice() as usize;
    let zeeman = |m: usize| p.omega0 * (m as f64 - p.j.value());
    if spin_free {
        let n_max = match cfg.k_max {
            Some(k) if k >= 0.0 => k.floor() as usize,
            Some(_) => {
                return Err(Error::Config(
                    "exact.k_max must be non-negative for a boson-only model".into(),
                ))
            }
            None => p.cutoff / 2,
        };
        let ladder = swanson_spectrum(p.omega, p.theta1, p.theta2, n_max + 1)?;
        let mut levels = Vec::new();
        for (n, e) in ladder[..=n_max].iter().enumerate() {
            for m in 0..=two_j {
                levels.push((n as f64, e + zeeman(m)));
            }
        }
        let bound = (0..=two_j)
            .map(|m| ladder[n_max + 1] + zeeman(m))
            .fold(f64::INFINITY, f64::min);
        return Ok(ExactLevels {
            model: "boson_only",
            k_max: n_max as f64,
            levels,
            bound,
        });
    }

    // Without squeezing the rotation is trivial and the counter-rotating
    // pair must vanish outright.
    let (g, d, x3) = if p.theta1 == 0.0 && p.theta2 == 0.0 {
        (0.0, 0.0, p.xi3)
    } else {
        tc_constraint(p)?
    };
    let wrapped = (p.xi3 - x3).rem_euclid(std::f64::consts::TAU);
    let phase_ok =
        (g == 0.0 && d == 0.0) || close(wrapped.min(std::f64::consts::TAU - wrapped), 0.0);
    if !(close(p.gamma, g) && close(p.delta, d) && phase_ok) {
        return Err(Error::domain(
            "exact",
            format!(
                "gamma, delta, xi3 must equal {g:?}, {d:?}, {x3:?} for the image to reduce to rotating-wave form (got {:?}, {:?}, {:?})",
                p.gamma, p.delta, p.xi3
            ),
        ));
    }
    let red = reduce(p)?;
    let k_max = cfg.k_max.unwrap_or_else(|| default_k_max(p.j, p.cutoff));
    let blocks = exact_spectrum(&red, p.j, k_max + 1.0)?;
    let (inside, beyond): (Vec<_>, Vec<_>) = blocks.iter().partition(|b| b.k_value <= k_max + 1e-9);
    let bound = beyond
        .iter()
        .filter_map(|b| b.eigenvalues.first().copied())
        .fold(f64::INFINITY, f64::min);
    let levels = inside
        .iter()
        .flat_map(|b| b.eigenvalues.iter().map(move |&e| (b.k_value, e)))
        .collect();
    Ok(ExactLevels {
        model: "rotating_wave",
        k_max,
        levels,
        bound,
    })
}

fn cmd_exact(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let p = &cfg.params;
    validate(p).into_result()?;
    let ExactLevels {
        model,
        k_max,
        mut levels,
        bound,
    } = exact_levels(cfg)?;
    levels.retain(|&(_, e)| e < bound);
    levels.sort_by(|a, b| a.1.total_cmp(&b.1));
    let dense = h_spectrum(p, false)?.real_parts();
    let mut dense_sorted = dense;
    dense_sorted.sort_by(f64::total_cmp);
    let rows: Vec<LevelRow> = levels
        .iter()
        .zip(&dense_sorted)
        .enumerate()
        .map(|(index, (&(label, exact), &dense))| LevelRow {
            index,
            label,
            exact,
            dense,
            difference: dense - exact,
        })
        .collect();
    let max_difference = rows.iter().map(|r| r.difference.abs()).fold(0.0, f64::max);
    let body = match cfg.format {
        Format::Json => json(&ExactOutput {
            model,
            k_max,
            max_difference,
            levels: rows,
        }),
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        float(r.label),
                        float(r.exact),
                        float(r.dense),
                        float(r.difference),
                    ]
                })
                .collect();
            table_csv(&["index", "label", "exact", "dense", "difference"], &table)
        }
    };
    emit(cfg, &body, stdout)
}

fn coupling_label(param: &SweepParam) -> String {
    match param {
        SweepParam::Lambda1 => "\u{3bb}\u{2081}".into(),
        SweepParam::Lambda2 => "\u{3bb}\u{2082}".into(),
        SweepParam::Field(name) => name.clone(),
    }
}

fn cmd_scan(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("scan needs a sweep".into()))?;
    let records = scan(&cfg.params, sweep, cfg.policy(), cfg.route)?;
    let body = match cfg.format {
        Format::Csv => scan_csv(&records),
        Format::Json => json(&records),
    };
    if let Some(path) = &cfg.plot_path {
        write_plot(
            &records,
            path,
            &PlotOptions {
                coupling_label: coupling_label(&sweep.param),
            },
        )?;
    }
    emit(cfg, &body, stdout)?;
    if !records.is_empty() && records.iter().all(|r| r.failure.is_some()) {
        let first = records[0].failure.clone().unwrap_or_default();
        return Err(Error::domain(
            "scan",
            format!("every point failed; first: {first}"),
        ));
    }
    Ok(())
}
