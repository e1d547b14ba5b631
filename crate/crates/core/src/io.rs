//! Artifact files: `field.csv` with its `field.meta.json` sidecar,
//! `bounds.json`, `report.json` and `sweep.csv`. JSON maps are ordered and
//! floats use the shortest round-trip form, so equal inputs give equal bytes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundRow, BoundSet};
use crate::error::{Error, Result};
use crate::limit::CauchyReport;
use crate::verify::{Record, TraceSummary};
use crate::viscous::{Field, FieldMeta};

pub const FIELD_CSV: &str = "field.csv";
pub const FIELD_META: &str = "field.meta.json";
pub const BOUNDS_JSON: &str = "bounds.json";
pub const REPORT_JSON: &str = "report.json";
pub const SWEEP_CSV: &str = "sweep.csv";

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    fs::write(path, to_json(value))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsFile {
    pub instance_hash: String,
    pub bounds: BoundSet,
    pub table: Vec<BoundRow>,
}

impl BoundsFile {
    pub fn new(instance_hash: &str, bounds: BoundSet, rows: usize) -> Self {
        let table = bounds.table(rows);
        BoundsFile {
            instance_hash: instance_hash.to_string(),
            bounds,
            table,
        }
    }
}

pub fn write_field(dir: &Path, field: &Field, meta: &FieldMeta) -> io::Result<()> {
    field.write_csv(&dir.join(FIELD_CSV))?;
    write_json(&dir.join(FIELD_META), meta)
}

/// Reads `field.csv` and its sidecar back.
pub fn read_field(dir: &Path) -> Result<(Field, FieldMeta)> {
    let read = |name: &str| {
        fs::read_to_string(dir.join(name)).map_err(|e| Error::Parse(format!("{}: {e}", dir.join(name).display())))
    };
    let meta: FieldMeta = serde_json::from_str(&read(FIELD_META)?).map_err(|e| Error::Parse(format!("{FIELD_META}: {e}")))?;
    let field = Field::from_csv(&read(FIELD_CSV)?, meta.epsilon)?;
    if !field.grid.same_as(&meta.grid) {
        return Err(Error::GridMismatch(format!(
            "{FIELD_CSV} grid {:?} disagrees with {FIELD_META} grid {:?}",
            field.grid, meta.grid
        )));
    }
    Ok((field, meta))
}

/// Contents of `report.json`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<TraceSummary>,
}

impl ReportFile {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.verdict.passed())
    }
}

pub fn write_report(path: &Path, report: &ReportFile) -> io::Result<()> {
    write_json(path, report)
}

/// `m,eps_m,eps_next,d_m,ratio` rows; `ratio` is `d_m / d_{m-1}`, empty on
/// the first row.
pub fn sweep_csv(c: &CauchyReport) -> String {
    let mut s = String::from("m,eps_m,eps_next,d_m,ratio\n");
    for (m, d) in c.distances.iter().enumerate() {
        let ratio = if m == 0 { String::new() } else { format!("{:.16e}", c.ratios[m - 1]) };
        let _ = writeln!(s, "{m},{:.16e},{:.16e},{d:.16e},{ratio}", c.eps[m], c.eps[m + 1]);
    }
    s
}

/// `nx,dx,error` rows of a grid-refinement study.
pub fn refinement_csv(rows: &[(usize, f64, f64)]) -> String {
    let mut s = String::from("nx,dx,error\n");
    for (nx, dx, e) in rows {
        let _ = writeln!(s, "{nx},{dx:.16e},{e:.16e}");
    }
    s
}

/// Least-squares slope of `log e` against `log dx`, skipping zero errors.
pub fn observed_order(rows: &[(usize, f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.2 > 0.0)
        .map(|r| (r.1.ln(), r.2.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
