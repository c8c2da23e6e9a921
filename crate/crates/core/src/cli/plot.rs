//! Two-panel SVG of a scan: ⟨Jz⟩/j and ⟨a†a⟩/j against the coupling, one
//! line per j with the analytic curve dashed.

use std::fmt::Write as _;
use std::path::Path;

use crate::basis::Spin;
use crate::error::{Error, Result};
use crate::qpt::ScanRecord;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 300.0;
const TOP: f64 = 40.0;
const LEFTS: [f64; 2] = [70.0, 520.0];
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub coupling_label: String,
}

/// Points of one j, sorted by coupling. NaN rows are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub j: Spin,
    pub coupling: Vec<f64>,
    pub jz: Vec<f64>,
    pub n: Vec<f64>,
    pub analytic_jz: Vec<f64>,
    pub analytic_n: Vec<f64>,
}

pub fn plot_series(records: &[ScanRecord]) -> Vec<Series> {
    let mut js: Vec<Spin> = records.iter().map(|r| r.j).collect();
    js.sort();
    js.dedup();
    js.into_iter()
        .map(|j| {
            let mut rows: Vec<&ScanRecord> = records
                .iter()
                .filter(|r| {
                    r.j == j
                        && r.failure.is_none()
                        && r.jz_over_j.is_finite()
                        && r.n_over_j.is_finite()
                })
                .collect();
            rows.sort_by(|a, b| a.coupling.total_cmp(&b.coupling));
            Series {
                j,
                coupling: rows.iter().map(|r| r.coupling).collect(),
                jz: rows.iter().map(|r| r.jz_over_j).collect(),
                n: rows.iter().map(|r| r.n_over_j).collect(),
                analytic_jz: rows.iter().map(|r| r.analytic_jz).collect(),
                analytic_n: rows.iter().map(|r| r.analytic_n).collect(),
            }
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

struct Panel {
    left: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Panel {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * PANEL_W
    }

    fn py(&self, y: f64) -> f64 {
        TOP + PANEL_H - (y - self.y.0) / (self.y.1 - self.y.0) * PANEL_H
    }

    fn polyline(&self, svg: &mut String, xs: &[f64], ys: &[f64], color: &str, dashed: bool) {
        let mut pts = String::new();
        for (&x, &y) in xs.iter().zip(ys) {
            if y.is_finite() {
                let _ = write!(pts, "{:.2},{:.2} ", self.px(x), self.py(y));
            }
        }
        let dash = if dashed {
            " stroke-dasharray=\"6,4\""
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
            pts.trim_end()
        );
    }

    fn axes(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (l, t) = (self.left, TOP);
        let _ = writeln!(
            svg,
            "<rect x=\"{l:.2}\" y=\"{t:.2}\" width=\"{PANEL_W:.2}\" height=\"{PANEL_H:.2}\" fill=\"none\" stroke=\"#000\"/>"
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = self.x.0 + f * (self.x.1 - self.x.0);
            let yv = self.y.0 + f * (self.y.1 - self.y.0);
            let (xp, yp) = (self.px(xv), self.py(yv));
            let _ = writeln!(
                svg,
                "<line x1=\"{xp:.2}\" y1=\"{:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"#000\"/>\
                 <text x=\"{xp:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
                t + PANEL_H,
                t + PANEL_H + 5.0,
                t + PANEL_H + 18.0,
                label(xv)
            );
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{l:.2}\" y2=\"{yp:.2}\" stroke=\"#000\"/>\
                 <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
                l - 5.0,
                l - 8.0,
                yp + 4.0,
                label(yv)
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            l + PANEL_W / 2.0,
            t + PANEL_H + 38.0,
            escape(xlabel)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            l + PANEL_W / 2.0,
            t - 12.0,
            escape(ylabel)
        );
    }
}

/// SVG 1.1 document. Needs at least two plottable records.
pub fn render_svg(records: &[ScanRecord], options: &PlotOptions) -> Result<String> {
    let series = plot_series(records);
    let points: usize = series.iter().map(|s| s.coupling.len()).sum();
    if points < 2 {
        return Err(Error::Config(format!(
            "plot needs at least two successful records (got {points})"
        )));
    }
    let x = range(series.iter().flat_map(|s| s.coupling.iter().copied()));
    let y_jz = range(
        series
            .iter()
            .flat_map(|s| s.jz.iter().chain(&s.analytic_jz).copied()),
    );
    let y_n = range(
        series
            .iter()
            .flat_map(|s| s.n.iter().chain(&s.analytic_n).copied()),
    );
    let panels = [
        (
            Panel {
                left: LEFTS[0],
                x,
                y: y_jz,
            },
            "\u{27e8}Jz\u{27e9}/j",
        ),
        (
            Panel {
                left: LEFTS[1],
                x,
                y: y_n,
            },
            "\u{27e8}a\u{2020}a\u{27e9}/j",
        ),
    ];

    // Analytic curves coincide across j for the collective couplings; draw
    // them once in that case.
    let same = |a: &[f64], b: &[f64]| {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs()))
    };
    let shared = series.windows(2).all(|w| {
        same(&w[0].coupling, &w[1].coupling)
            && same(&w[0].analytic_jz, &w[1].analytic_jz)
            && same(&w[0].analytic_n, &w[1].analytic_n)
    });

    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>");
    for (k, (panel, ylabel)) in panels.iter().enumerate() {
        panel.axes(&mut svg, &options.coupling_label, ylabel);
        for (i, s) in series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let (ys, analytic) = if k == 0 {
                (&s.jz, &s.analytic_jz)
            } else {
                (&s.n, &s.analytic_n)
            };
            panel.polyline(&mut svg, &s.coupling, ys, color, false);
            if !shared {
                panel.polyline(&mut svg, &s.coupling, analytic, color, true);
            } else if i == 0 {
                panel.polyline(&mut svg, &s.coupling, analytic, "#000", true);
            }
        }
    }
    let mut y = HEIGHT - 22.0;
    let mut x = LEFTS[0];
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">j = {}</text>",
            x + 24.0,
            x + 30.0,
            y + 4.0,
            s.j
        );
        x += 90.0;
        if x > WIDTH - 200.0 {
            x = LEFTS[0];
            y += 16.0;
        }
    }
    let _ = writeln!(
        svg,
        "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#000\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\
         <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">analytic</text>",
        x + 24.0,
        x + 30.0,
        y + 4.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the plot. Nothing is written on error.
pub fn write_plot(records: &[ScanRecord], path: &Path, options: &PlotOptions) -> Result<()> {
    let svg = render_svg(records, options)?;
    std::fs::write(path, svg).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(c: f64, twice: u32, jz: f64) -> ScanRecord {
        ScanRecord {
            coupling: c,
            j: Spin::from_twice(twice),
            cutoff: 16,
            jz_over_j: jz,
            n_over_j: -jz,
            e0_over_j: 0.0,
            analytic_jz: jz,
            analytic_n: -jz,
            converged: true,
            failure: None,
        }
    }

    #[test]
    fn series_grouped_and_sorted() {
        let recs = [
            record(0.5, 2, -0.5),
            record(0.1, 2, -1.0),
            record(0.1, 8, f64::NAN),
            record(0.5, 8, -0.4),
        ];
        let s = plot_series(&recs);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].coupling, vec![0.1, 0.5]);
        assert_eq!(s[1].coupling, vec![0.5]);
    }

    #[test]
    fn svg_structure() {
        let recs = [
            record(0.1, 2, -1.0),
            record(0.5, 2, -0.5),
            record(0.1, 4, -1.0),
            record(0.5, 4, -0.6),
        ];
        let svg = render_svg(
            &recs,
            &PlotOptions {
                coupling_label: "a<b".into(),
            },
        )
        .unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("version=\"1.1\""));
        assert!(svg.contains("a&lt;b"));
        // two solid lines per panel plus a dashed analytic line each
        assert_eq!(svg.matches("<polyline").count(), 2 * (2 + 2));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn too_few_points_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.svg");
        let opts = PlotOptions {
            coupling_label: "x".into(),
        };
        assert!(write_plot(&[record(0.1, 2, -1.0)], &path, &opts).is_err());
        assert!(write_plot(&[], &path, &opts).is_err());
        assert!(!path.exists());
    }
}
