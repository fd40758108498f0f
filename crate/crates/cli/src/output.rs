//! Text, CSV and JSON rendering of command results.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    I(u64),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::I(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::Empty)
    }
}

/// Nine significant digits, trailing zeros dropped; exponent form outside
/// `[1e-4, 1e9)`.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let e = v.abs().log10().floor() as i32;
    if !(-4..9).contains(&e) {
        let s = format!("{v:.8e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{exp}", trim_zeros(mant));
    }
    let decimals = (8 - e).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest string that parses back to the same binary64.
pub fn exact(v: f64) -> String {
    serde_json::to_string(&v).expect("f64 serialises")
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::F(v) => sig9(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => "-".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::F(v) => exact(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

/// A result as rows of named columns, plus a typed JSON form.
pub struct Rendered {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub json: String,
    /// extra lines shown after the text form only
    pub notes: Vec<String>,
}

impl Rendered {
    pub fn new<T: Serialize>(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>, json: &T) -> anyhow::Result<Self> {
        Ok(Self {
            columns,
            rows,
            json: serde_json::to_string_pretty(json)?,
            notes: Vec::new(),
        })
    }

    pub fn single<T: Serialize>(fields: Vec<(&'static str, Cell)>, json: &T) -> anyhow::Result<Self> {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        Self::new(columns, vec![row], json)
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> anyhow::Result<()> {
        match format {
            Format::Json => {
                writeln!(w, "{}", self.json)?;
            }
            Format::Csv => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(&self.columns)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::csv))?;
                }
                out.flush()?;
            }
            Format::Text => {
                if self.rows.len() == 1 {
                    let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
                    for (c, v) in self.columns.iter().zip(&self.rows[0]) {
                        writeln!(w, "{c:<width$}  {}", v.text())?;
                    }
                } else {
                    let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
                    let widths: Vec<usize> = (0..self.columns.len())
                        .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
                        .collect();
                    let line = |vals: Vec<&str>| {
                        vals.iter()
                            .zip(&widths)
                            .map(|(v, n)| format!("{v:<n$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                            .trim_end()
                            .to_string()
                    };
                    writeln!(w, "{}", line(self.columns.clone()))?;
                    for r in &cells {
                        writeln!(w, "{}", line(r.iter().map(String::as_str).collect()))?;
                    }
                }
                for n in &self.notes {
                    writeln!(w, "{n}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(sig9(228.0), "228");
        assert_eq!(sig9(13_160_747.43), "13160747.4");
        assert_eq!(sig9(1e8), "100000000");
        assert_eq!(sig9(1e12), "1e12");
        assert_eq!(sig9(-3.547_247_004_56e-5), "-3.547247e-5");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(9.9999999999), "10");
    }

    #[test]
    fn exact_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0] {
            assert_eq!(exact(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
