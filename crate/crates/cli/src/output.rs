use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::{Cli, Format, OUT_DIR_ENV};

/// Bumped whenever a command's CSV columns change.
pub const SCHEMA_VERSION: u32 = 1;

/// Fixed columns and their rows.
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn destination(cli: &Cli, command: &str, ext: &str) -> Option<PathBuf> {
    if let Some(out) = &cli.out {
        return Some(out.clone());
    }
    std::env::var_os(OUT_DIR_ENV).map(|dir| Path::new(&dir).join(format!("{command}.{ext}")))
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes CSV to any sink, led by a `#` comment naming the tool version,
/// the command and the column schema.
pub fn write_csv(w: &mut dyn Write, command: &str, table: &Table) -> Result<()> {
    writeln!(w, "# rqc {} {command} schema={SCHEMA_VERSION}", env!("CARGO_PKG_VERSION"))?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(table.columns)?;
    for row in &table.rows {
        csv.write_record(row.iter().map(cell))?;
    }
    csv.flush()?;
    Ok(())
}

fn table_json(table: &Table) -> Value {
    Value::Array(
        table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    table.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.clone())).collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn emit_table(cli: &Cli, command: &str, table: &Table) -> Result<()> {
    match cli.format {
        Format::Csv => {
            let path = destination(cli, command, "csv");
            let mut w = open(path.as_deref())?;
            write_csv(&mut w, command, table)?;
            w.flush()?;
        }
        Format::Json => emit_json(cli, command, &table_json(table))?,
    }
    Ok(())
}

pub fn emit_json(cli: &Cli, command: &str, value: &Value) -> Result<()> {
    let path = destination(cli, command, "json");
    let mut w = open(path.as_deref())?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes a table to a named file regardless of `--out` and `--format`.
pub fn write_csv_file(path: &Path, command: &str, table: &Table) -> Result<()> {
    let mut w = open(Some(path))?;
    write_csv(&mut w, command, table)?;
    w.flush()?;
    Ok(())
}
