use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use weightlab::{Status, Verdict};

/// Bumped whenever a field of [`Report`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Headline verdict of a run; these drive the exit code.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub status: Status,
    pub margin: Option<f64>,
    pub horizon: Option<String>,
    pub note: String,
}

impl VerdictLine {
    pub fn from_verdict(name: impl Into<String>, v: &Verdict) -> Self {
        Self {
            name: name.into(),
            status: v.status,
            margin: v.margin,
            horizon: v.horizon.map(|g| g.label()),
            note: v.note.clone(),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, note: impl Into<String>) -> Self {
        let status = if ok { Status::Holds } else { Status::Fails };
        Self { name: name.into(), status, margin: None, horizon: None, note: note.into() }
    }

    pub fn status(name: impl Into<String>, status: Status, note: impl Into<String>) -> Self {
        Self { name: name.into(), status, margin: None, horizon: None, note: note.into() }
    }
}

/// Rows with fixed headers; every command documents its columns.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| escape(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Shortest round-trip form; non-finite values spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// One sampled curve, written to its own CSV.
#[derive(Debug, Clone)]
pub struct Curve {
    pub name: String,
    pub x_label: &'static str,
    pub y_label: &'static str,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(name: impl Into<String>, x_label: &'static str, y_label: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), x_label, y_label, points }
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[self.x_label, self.y_label]);
        for &(x, y) in &self.points {
            t.push(vec![num(x), num(y)]);
        }
        t
    }
}

/// What a command hands back before it is serialized.
pub struct Outcome {
    pub inputs: Value,
    pub verdicts: Vec<VerdictLine>,
    pub result: Value,
    pub table: Table,
    pub curves: Vec<Curve>,
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub inputs: &'a Value,
    pub verdicts: &'a [VerdictLine],
    pub result: &'a Value,
}

pub fn render_json(command: &str, seed: u64, outcome: &Outcome) -> Result<String> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool: "weightlab",
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        inputs: &outcome.inputs,
        verdicts: &outcome.verdicts,
        result: &outcome.result,
    };
    let mut s = serde_json::to_string_pretty(&report)?;
    s.push('\n');
    Ok(s)
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' }).collect()
}

/// Writes `<dir>/<command>_<curve>.csv` for every curve, in order.
pub fn emit_plot_data(dir: &Path, command: &str, curves: &[Curve]) -> Result<Vec<PathBuf>> {
    if curves.is_empty() {
        return Ok(Vec::new());
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::with_capacity(curves.len());
    for c in curves {
        let path = dir.join(format!("{}_{}.csv", file_stem(command), file_stem(&c.name)));
        fs::write(&path, c.table().to_csv()).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
