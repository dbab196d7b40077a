use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::config::Command;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format!("{x:.11e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub cells: Vec<Cell>,
    pub provenance: String,
}

/// One `(log2 N, log2 norm)` series.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotBlock {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: Command,
    pub columns: Vec<&'static str>,
    pub rows: Vec<ResultRow>,
    pub blocks: Option<Vec<PlotBlock>>,
}

impl Table {
    pub fn new(command: Command, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
            blocks: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Plotdata,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "plotdata" => Ok(Format::Plotdata),
            other => Err(Error::Config(format!("unknown format {other:?} (expected csv or plotdata)"))),
        }
    }
}

/// CSV with a `command` column first and `provenance` last; floats carry 12
/// significant digits, lines end in LF.
pub fn render_csv(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    let mut header = vec!["command"];
    header.extend(&table.columns);
    header.push("provenance");
    w.write_record(&header).map_err(csv_err)?;
    for row in &table.rows {
        if row.cells.len() != table.columns.len() {
            return Err(Error::SizeMismatch {
                expected: table.columns.len(),
                got: row.cells.len(),
            });
        }
        let mut rec = vec![table.command.name().to_string()];
        rec.extend(row.cells.iter().map(Cell::render));
        rec.push(row.provenance.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Whitespace-separated `(log2 N, log2 norm)` lines, one block per series,
/// blocks separated by a blank line.
pub fn render_plotdata(table: &Table) -> Result<Vec<u8>> {
    let blocks = table
        .blocks
        .as_ref()
        .ok_or_else(|| Error::Config(format!("plotdata is not available for the {} command", table.command)))?;
    let text = blocks
        .iter()
        .map(|b| {
            b.points
                .iter()
                .map(|(x, y)| format!("{x:.11e} {y:.11e}\n"))
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(text.into_bytes())
}

/// Renders fully before touching the destination, so a failed render leaves
/// no file behind. `None` writes to stdout.
pub fn emit_results(table: &Table, path: Option<&Path>, format: Format) -> Result<()> {
    let bytes = match format {
        Format::Csv => render_csv(table)?,
        Format::Plotdata => render_plotdata(table)?,
    };
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
