//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::basis::Spin;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::qpt::{set_field, CutoffPolicy, Route, SweepParam, SweepSpec, FIELDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Spectrum,
    MetricCheck,
    Exact,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Spectrum => "spectrum",
            Command::MetricCheck => "metric-check",
            Command::Exact => "exact",
            Command::Scan => "scan",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "validate" => Ok(Command::Validate),
            "spectrum" => Ok(Command::Spectrum),
            "metric-check" => Ok(Command::MetricCheck),
            "exact" => Ok(Command::Exact),
            "scan" => Ok(Command::Scan),
            other => Err(Error::Config(format!("unknown command `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "output.format must be csv or json (got `{other}`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Overrides the default reality tolerance of reported spectra.
    pub reality: Option<f64>,
    /// Convergence threshold of the adaptive cutoff.
    pub convergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub plot_path: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub cutoff_start: usize,
    pub cutoff_cap: usize,
    pub route: Route,
    pub k_max: Option<f64>,
}

/// Every key accepted in a config file or by `--set`.
pub const KEYS: [&str; 28] = [
    "command",
    "omega",
    "omega0",
    "theta1",
    "theta2",
    "alpha",
    "beta",
    "gamma",
    "delta",
    "xi1",
    "xi2",
    "xi3",
    "j",
    "cutoff",
    "sweep.param",
    "sweep.start",
    "sweep.stop",
    "sweep.steps",
    "sweep.j_list",
    "output.path",
    "output.format",
    "plot.path",
    "tol.reality",
    "tol.convergence",
    "scan.cutoff_start",
    "scan.cutoff_cap",
    "scan.route",
    "exact.k_max",
];

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// skipped; a key may appear only once.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                no + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", no + 1)));
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{key}`",
                no + 1
            )));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

/// Parses a `--set KEY=VALUE` argument.
pub fn parse_assignment(arg: &str) -> Result<(String, String)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected KEY=VALUE, got `{arg}`")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn number(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got `{value}`")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn count(key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| {
        Error::Config(format!(
            "{key}: expected a non-negative integer, got `{value}`"
        ))
    })
}

fn spin(key: &str, value: &str) -> Result<Spin> {
    value
        .parse()
        .map_err(|e: Error| Error::Config(format!("{key}: {e}")))
}

#[derive(Default)]
struct SweepDraft {
    param: Option<SweepParam>,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
    j_list: Option<Vec<Spin>>,
}

impl RunConfig {
    /// Builds a configuration from key/value pairs applied in order; later
    /// pairs override earlier ones. `command` comes from the pairs unless
    /// given explicitly.
    pub fn from_pairs(command: Option<Command>, pairs: &[(String, String)]) -> Result<Self> {
        let mut params = ModelParams::default();
        let mut sweep = SweepDraft::default();
        let mut from_file: Option<Command> = None;
        let mut output_path = None;
        let mut format = None;
        let mut plot_path = None;
        let policy = CutoffPolicy::default();
        let mut tolerances = Tolerances {
            reality: None,
            convergence: policy.tolerance,
        };
        let (mut cutoff_start, mut cutoff_cap) = (policy.start, policy.cap);
        let mut route = Route::Image;
        let mut k_max = None;

        for (key, value) in pairs {
            let (key, value) = (key.as_str(), value.as_str());
            match key {
                "command" => from_file = Some(value.parse()?),
                k if FIELDS.contains(&k) => set_field(&mut params, k, number(k, value)?)?,
                "j" => params.j = spin(key, value)?,
                "cutoff" => params.cutoff = count(key, value)?,
                "sweep.param" => sweep.param = Some(value.parse()?),
                "sweep.start" => sweep.start = Some(number(key, value)?),
                "sweep.stop" => sweep.stop = Some(number(key, value)?),
                "sweep.steps" => sweep.steps = Some(count(key, value)?),
                "sweep.j_list" => {
                    sweep.j_list = Some(
                        value
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|s| !s.is_empty())
                            .map(|s| spin(key, s))
                            .collect::<Result<_>>()?,
                    )
                }
                "output.path" => output_path = Some(PathBuf::from(value)),
                "output.format" => format = Some(value.parse()?),
                "plot.path" => plot_path = Some(PathBuf::from(value)),
                "tol.reality" => tolerances.reality = Some(number(key, value)?),
                "tol.convergence" => tolerances.convergence = number(key, value)?,
                "scan.cutoff_start" => cutoff_start = count(key, value)?,
                "scan.cutoff_cap" => cutoff_cap = count(key, value)?,
                "scan.route" => {
                    route = match value {
                        "image" => Route::Image,
                        "direct" => Route::Direct,
                        other => {
                            return Err(Error::Config(format!(
                                "scan.route must be image or direct (got `{other}`)"
                            )))
                        }
                    }
                }
                "exact.k_max" => k_max = Some(number(key, value)?),
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }

        let command = match (command, from_file) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!(
                    "command `{}` conflicts with `command = {}` in the configuration",
                    a.name(),
                    b.name()
                )))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(Error::Config("no command given".into())),
        };

        let any_sweep = sweep.param.is_some()
            || sweep.start.is_some()
            || sweep.stop.is_some()
            || sweep.steps.is_some()
            || sweep.j_list.is_some();
        let sweep = if any_sweep {
            let missing = |name: &str| {
                Error::Config(format!(
                    "sweep.{name} is required when a sweep is configured"
                ))
            };
            let spec = SweepSpec {
                param: sweep.param.ok_or_else(|| missing("param"))?,
                start: sweep.start.ok_or_else(|| missing("start"))?,
                stop: sweep.stop.ok_or_else(|| missing("stop"))?,
                steps: sweep.steps.ok_or_else(|| missing("steps"))?,
                j_list: sweep.j_list.unwrap_or_else(|| vec![params.j]),
            };
            spec.check()?;
            Some(spec)
        } else {
            None
        };
        if command == Command::Scan && sweep.is_none() {
            return Err(Error::Config(
                "scan needs sweep.param, sweep.start, sweep.stop and sweep.steps".into(),
            ));
        }
        if cutoff_start == 0 || cutoff_cap < cutoff_start {
            return Err(Error::Config(format!(
                "need 0 < scan.cutoff_start <= scan.cutoff_cap (got {cutoff_start}, {cutoff_cap})"
            )));
        }
        if !(tolerances.convergence > 0.0) {
            return Err(Error::Config("tol.convergence must be positive".into()));
        }
        if params.cutoff == 0 && command != Command::Scan {
            return Err(Error::Config("cutoff must be positive".into()));
        }
        let default_format = if command == Command::Scan {
            Format::Csv
        } else {
            Format::Json
        };
        Ok(RunConfig {
            command,
            params,
            sweep,
            output_path,
            format: format.unwrap_or(default_format),
            plot_path,
            tolerances,
            cutoff_start,
            cutoff_cap,
            route,
            k_max,
        })
    }

    pub fn policy(&self) -> CutoffPolicy {
        CutoffPolicy {
            start: self.cutoff_start,
            cap: self.cutoff_cap,
            tolerance: self.tolerances.convergence,
        }
    }

    /// Fully resolved configuration in the input format. Parsing it back
    /// gives an identical `RunConfig`.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("command", self.command.name().into());
        for (name, value) in FIELDS.iter().zip(p.values()) {
            line(name, format!("{value:?}"));
        }
        line("j", p.j.to_string());
        line("cutoff", p.cutoff.to_string());
        if let Some(sw) = &self.sweep {
            line("sweep.param", sw.param.to_string());
            line("sweep.start", format!("{:?}", sw.start));
            line("sweep.stop", format!("{:?}", sw.stop));
            line("sweep.steps", sw.steps.to_string());
            let js: Vec<String> = sw.j_list.iter().map(Spin::to_string).collect();
            line("sweep.j_list", js.join(", "));
        }
        if let Some(path) = &self.output_path {
            line("output.path", path.display().to_string());
        }
        line(
            "output.format",
            match self.format {
                Format::Csv => "csv".into(),
                Format::Json => "json".into(),
            },
        );
        if let Some(path) = &self.plot_path {
            line("plot.path", path.display().to_string());
        }
        if let Some(t) = self.tolerances.reality {
            line("tol.reality", format!("{t:?}"));
        }
        line(
            "tol.convergence",
            format!("{:?}", self.tolerances.convergence),
        );
        line("scan.cutoff_start", self.cutoff_start.to_string());
        line("scan.cutoff_cap", self.cutoff_cap.to_string());
        line(
            "scan.route",
            match self.route {
                Route::Image => "image".into(),
                Route::Direct => "direct".into(),
            },
        );
        if let Some(k) = self.k_max {
            line("exact.k_max", format!("{k:?}"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> Vec<(String, String)> {
        parse_pairs(text).unwrap()
    }

    #[test]
    fn parses_comments_and_values() {
        let p = pairs("# model\nalpha = 1\n\nbeta=2 # inline\n  j = 3/2\n");
        assert_eq!(
            p,
            vec![
                ("alpha".into(), "1".into()),
                ("beta".into(), "2".into()),
                ("j".into(), "3/2".into())
            ]
        );
        let c = RunConfig::from_pairs(Some(Command::Validate), &p).unwrap();
        assert_eq!(
            (c.params.alpha, c.params.beta, c.params.j),
            (1.0, 2.0, Spin::from_twice(3))
        );
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_pairs("alpha 1").is_err());
        assert!(parse_pairs("alpha = 1\nalpha = 2").is_err());
        assert!(parse_pairs(" = 2").is_err());
        let bad = |t: &str| RunConfig::from_pairs(Some(Command::Validate), &pairs(t)).unwrap_err();
        assert!(bad("foo = 1").to_string().contains("unknown key"));
        assert!(bad("alpha = x").to_string().contains("alpha"));
        assert!(bad("j = 0.3").to_string().contains("j"));
        assert!(bad("alpha = inf").to_string().contains("finite"));
    }

    #[test]
    fn sweep_requirements() {
        let scan = |t: &str| RunConfig::from_pairs(Some(Command::Scan), &pairs(t));
        assert!(scan("alpha = 1").is_err());
        assert!(scan("sweep.param = lambda2\nsweep.start = 0.1").is_err());
        assert!(
            scan("sweep.param = lambda2\nsweep.start = 0.1\nsweep.stop = 1\nsweep.steps = 1")
                .is_err()
        );
        assert!(
            scan("sweep.param = lambda2\nsweep.start = 1\nsweep.stop = 0.1\nsweep.steps = 3")
                .is_err()
        );
        let c = scan("sweep.param = lambda2\nsweep.start = 0.1\nsweep.stop = 1\nsweep.steps = 10\nsweep.j_list = 4, 8").unwrap();
        let sw = c.sweep.unwrap();
        assert_eq!(sw.j_list, vec![Spin::from_twice(8), Spin::from_twice(16)]);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn command_resolution() {
        let p = pairs("command = scan");
        assert!(RunConfig::from_pairs(Some(Command::Validate), &p).is_err());
        assert!(RunConfig::from_pairs(None, &[]).is_err());
        let c = RunConfig::from_pairs(None, &pairs("command = exact")).unwrap();
        assert_eq!(c.command, Command::Exact);
    }

    #[test]
    fn resolved_text_round_trips() {
        let text = "command = scan\nalpha = 0.1\nbeta = 0.30000000000000004\nj = 1/2\nsweep.param = alpha\n\
                    sweep.start = 0.1\nsweep.stop = 0.9\nsweep.steps = 5\nsweep.j_list = 1/2 3/2\n\
                    output.path = out.csv\nplot.path = out.svg\ntol.reality = 1e-9\nexact.k_max = 4\nscan.route = direct";
        let c = RunConfig::from_pairs(None, &pairs(text)).unwrap();
        let again = RunConfig::from_pairs(None, &pairs(&c.to_text())).unwrap();
        assert_eq!(c, again);
        assert_eq!(again.to_text(), c.to_text());
    }
}
