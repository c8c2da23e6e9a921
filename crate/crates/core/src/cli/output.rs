//! Tabular writers. Floats are written in shortest round-trip form so
//! reruns are byte-identical and values parse back exactly.

use std::fmt::Write as _;

use crate::qpt::ScanRecord;

pub const SCAN_HEADER: &str =
    "coupling,j,cutoff,jz_over_j,n_over_j,e0_over_j,analytic_jz,analytic_n,converged";

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{:?},{},{},{:?},{:?},{:?},{:?},{:?},{}",
            r.coupling,
            r.j,
            r.cutoff,
            r.jz_over_j,
            r.n_over_j,
            r.e0_over_j,
            r.analytic_jz,
            r.analytic_n,
            r.converged
        );
    }
    s
}

/// Generic CSV table; cells are written verbatim.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

/// Pretty JSON with a trailing newline.
pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}
