//! Tabular output as CSV or JSON.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A single table value.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Count(u64),
    /// Printed with 17 significant digits.
    Real(f64),
    /// Exact rational printed as `numerator/denominator`.
    Exact(String),
    Text(String),
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Count(c) => c.to_string(),
            Cell::Real(v) => format_g17(*v),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Count(c) => c.to_string(),
            Cell::Real(v) if v.is_finite() => format_g17(*v),
            Cell::Real(v) => serde_json::Value::String(format_g17(*v)).to_string(),
            Cell::Exact(s) | Cell::Text(s) => serde_json::Value::String(s.clone()).to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct OutputTable {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.headers.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn write<W: Write>(&self, format: Format, out: &mut W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.headers)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv_text))?;
        }
        writer.flush()
    }

    fn write_json<W: Write>(&self, out: &mut W) -> io::Result<()> {
        if self.rows.is_empty() {
            return writeln!(out, "[]");
        }
        writeln!(out, "[")?;
        let keys: Vec<String> = self
            .headers
            .iter()
            .map(|h| serde_json::Value::String(h.clone()).to_string())
            .collect();
        for (r, row) in self.rows.iter().enumerate() {
            let fields: Vec<String> = keys
                .iter()
                .zip(row)
                .map(|(k, cell)| format!("{k}: {}", cell.json_text()))
                .collect();
            let sep = if r + 1 == self.rows.len() { "" } else { "," };
            writeln!(out, "  {{{}}}{sep}", fields.join(", "))?;
        }
        writeln!(out, "]")
    }
}

/// Where [`emit`] writes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

pub fn emit(table: &OutputTable, format: Format, destination: &Destination) -> io::Result<()> {
    match destination {
        Destination::Stdout => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)
        }
        Destination::File(path) => {
            let mut file = io::BufWriter::new(File::create(path)?);
            table.write(format, &mut file)?;
            file.flush()
        }
    }
}

/// C-style `%.17g`: 17 significant digits, trailing zeros removed.
pub fn format_g17(value: f64) -> String {
    const PRECISION: i32 = 17;
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if value == 0.0 {
        return if value.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, value);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exponent) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (PRECISION - 1 - exponent) as usize;
        trim_fraction(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
