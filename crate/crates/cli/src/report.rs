use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// A table cell; numbers keep full precision in JSON and CSV.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Float(f64),
    /// Shown with 15 decimals in the human table.
    Fixed(f64),
    Int(u64),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(v) | Cell::Fixed(v) => float_json(*v),
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(v) | Cell::Fixed(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Float(v) if *v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e6) => format!("{v:.6e}"),
            Cell::Fixed(v) => format!("{v:.15}"),
            Cell::Null => "-".to_string(),
            other => other.plain(),
        }
    }
}

/// Non-finite floats have no JSON representation; they are written as strings.
pub fn float_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(v.to_string())
    }
}

/// Whether the sweep was over a grid or over random samples.
#[derive(Debug, Clone, Copy)]
pub enum Size {
    Grid(usize),
    Samples(usize),
    /// Series terms; reported under the `samples` key.
    Terms(usize),
}

/// The single result document of an invocation.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub size: Size,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub worst_case: Value,
    /// Extra top-level JSON fields.
    pub extra: Map<String, Value>,
    /// Lines printed under the human table.
    pub notes: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, size: Size, columns: Vec<&'static str>) -> Report {
        Report {
            command: command.into(),
            seed: None,
            size,
            columns,
            rows: Vec::new(),
            worst_case: Value::Null,
            extra: Map::new(),
            notes: Vec::new(),
            ok: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("seed".into(), json!(self.seed));
        match self.size {
            Size::Grid(n) => doc.insert("grid_size".into(), json!(n)),
            Size::Samples(n) | Size::Terms(n) => doc.insert("samples".into(), json!(n)),
        };
        let verdicts = self
            .rows
            .iter()
            .map(|row| {
                let fields = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()));
                Value::Object(fields.collect())
            })
            .collect();
        doc.insert("verdicts".into(), Value::Array(verdicts));
        doc.insert("worst_case".into(), self.worst_case.clone());
        doc.insert("ok".into(), json!(self.ok));
        for (k, v) in &self.extra {
            doc.insert(k.clone(), v.clone());
        }
        Value::Object(doc)
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::plain))?;
                }
                w.flush()
            }
            Format::Human => self.render_human(out),
        }
    }

    fn render_human(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut header = self.command.clone();
        match self.size {
            Size::Grid(n) => header.push_str(&format!("  (grid {n})")),
            Size::Samples(1) => header.push_str("  (1 sample)"),
            Size::Samples(n) => header.push_str(&format!("  ({n} samples)")),
            Size::Terms(n) => header.push_str(&format!("  ({n} terms)")),
        }
        if let Some(seed) = self.seed {
            header.push_str(&format!("  seed {seed}"));
        }
        writeln!(out, "{header}")?;
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([c.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: Vec<&str>| -> String {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for row in &cells {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        for note in &self.notes {
            writeln!(out, "{note}")?;
        }
        writeln!(
            out,
            "{}",
            if self.ok {
                "result: ok"
            } else {
                "result: FAILED"
            }
        )
    }
}
