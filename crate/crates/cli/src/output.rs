//! Atomic CSV/JSON emission with metadata headers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

/// Provenance written into every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub tolerances: Value,
}

impl Meta {
    pub fn new(config_sha256: impl Into<String>, tolerances: Value) -> Self {
        Self { tool: "acoustic-bh", version: env!("CARGO_PKG_VERSION"), config_sha256: config_sha256.into(), tolerances }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Named table; each column carries a one-line description for the header.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<(&'static str, &'static str)>) -> Self {
        Self { name: name.to_string(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

pub fn render_csv(table: &Table, meta: &Meta) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool: {} {}\n", meta.tool, meta.version));
    out.push_str(&format!("# config_sha256: {}\n", meta.config_sha256));
    out.push_str(&format!("# tolerances: {}\n", meta.tolerances));
    for (name, desc) in &table.columns {
        out.push_str(&format!("# column {name}: {desc}\n"));
    }
    let header: Vec<&str> = table.columns.iter().map(|c| c.0).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_table_json(table: &Table, meta: &Meta) -> Result<String> {
    let columns: Vec<Value> = table.columns.iter().map(|(n, d)| json!({"name": n, "description": d})).collect();
    let rows: Vec<Value> = table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
    Ok(serde_json::to_string_pretty(&json!({"meta": meta, "columns": columns, "rows": rows}))? + "\n")
}

/// Writes `table` as `<name>.csv` or `<name>.json`.
pub fn write_table(dir: &Path, table: &Table, format: Format, meta: &Meta) -> Result<PathBuf> {
    let (path, body) = match format {
        Format::Csv => (dir.join(format!("{}.csv", table.name)), render_csv(table, meta)),
        Format::Json => (dir.join(format!("{}.json", table.name)), render_table_json(table, meta)?),
    };
    atomic_write(&path, body.as_bytes())?;
    Ok(path)
}

/// Writes `value` as pretty JSON with a top-level "meta" entry.
pub fn write_json<S: Serialize>(dir: &Path, name: &str, value: &S, meta: &Meta) -> Result<PathBuf> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.insert("meta".into(), serde_json::to_value(meta)?);
    } else {
        v = json!({"meta": meta, "data": v});
    }
    let path = dir.join(name);
    atomic_write(&path, (serde_json::to_string_pretty(&v)? + "\n").as_bytes())?;
    Ok(path)
}
