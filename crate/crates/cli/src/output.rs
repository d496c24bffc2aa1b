use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

pub const TOOL: &str = "landscape-paths";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command's result: named columns, rows of JSON scalars, and notes that
/// go into the CSV header (or next to the rows in JSON).
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<(String, Value)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.notes.push((key.into(), value.into()));
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write<W: Write>(out: W, config: &RunConfig, table: &Table) -> std::io::Result<()> {
    match config.format.unwrap_or_default() {
        Format::Csv => write_csv(out, config, table),
        Format::Json => write_json(out, config, table),
    }
}

fn write_csv<W: Write>(mut out: W, config: &RunConfig, table: &Table) -> std::io::Result<()> {
    writeln!(out, "# {TOOL} {VERSION}")?;
    writeln!(out, "# command={}", config.command_name())?;
    writeln!(out, "# config={}", serde_json::to_string(config)?)?;
    if let Some(seed) = config.seed {
        writeln!(out, "# seed={seed}")?;
    }
    for (k, v) in &table.notes {
        writeln!(out, "# {k}={}", cell(v))?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(cell))?;
    }
    w.flush()
}

fn write_json<W: Write>(mut out: W, config: &RunConfig, table: &Table) -> std::io::Result<()> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .map(|c| c.to_string())
                .zip(row.iter().cloned())
                .collect();
            Value::Object(obj)
        })
        .collect();
    let notes: Map<String, Value> = table.notes.iter().cloned().collect();
    let doc = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": config.command_name(),
        "config": config,
        "seed": config.seed,
        "columns": table.columns,
        "rows": rows,
        "notes": notes,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
