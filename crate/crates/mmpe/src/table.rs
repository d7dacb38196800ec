//! Tabular results and their CSV form.

use crate::bounds::BoundReport;
use crate::engine::MmpeEstimate;
use crate::error::{MmpeError, Result};
use crate::infometrics::GapBreakdown;

/// Significant digits written for floating-point cells.
pub const SIG_DIGITS: usize = 12;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v, SIG_DIGITS),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

/// Format `v` with `digits` significant digits, `%g` style.
///
/// ```
/// use mmpe::table::fmt_sig;
/// assert_eq!(fmt_sig(0.5, 12), "0.5");
/// assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
/// assert_eq!(fmt_sig(1.5e-9, 12), "1.5e-9");
/// ```
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mant = trim_zeros(mant);
        return format!("{mant}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A header plus rows of cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric values of a named column.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| MmpeError::Parse(format!("csv write failed: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| MmpeError::Parse(format!("csv flush failed: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| MmpeError::Parse(e.to_string()))
    }
}

/// Header of [`estimates_table`].
pub const ESTIMATE_HEADER: [&str; 8] = ["dist_id", "n", "snr", "p", "method", "value", "stderr", "seed"];

pub fn estimate_row(e: &MmpeEstimate) -> Vec<Cell> {
    vec![
        e.dist_id.clone().into(),
        e.n.into(),
        e.snr.into(),
        e.p.into(),
        e.method.to_string().into(),
        e.value.into(),
        e.stderr.into(),
        e.seed.map(|s| Cell::Int(s as i64)).unwrap_or(Cell::Empty),
    ]
}

/// MMPE estimates, one per row.
pub fn estimates_table(es: &[MmpeEstimate]) -> Table {
    let mut t = Table::new(&ESTIMATE_HEADER);
    for e in es {
        t.push(estimate_row(e));
    }
    t
}

/// Header of [`bounds_table`].
pub const BOUND_HEADER: [&str; 6] = ["name", "inputs", "bound", "direction", "truth", "margin"];

/// Bound reports, one per row.
pub fn bounds_table(rs: &[BoundReport]) -> Table {
    let mut t = Table::new(&BOUND_HEADER);
    for r in rs {
        t.push(vec![
            r.name.into(),
            r.inputs_string().into(),
            r.value.into(),
            r.direction.to_string().into(),
            r.truth_on_scale().map(|x| x.0).into(),
            r.margin().into(),
        ]);
    }
    t
}

/// Header of [`gaps_table`].
pub const GAP_HEADER: [&str; 8] = ["snr", "p", "H", "G1", "G2", "gap", "lower", "exact_MI"];

/// Gap breakdowns, one per row.
pub fn gaps_table(gs: &[GapBreakdown]) -> Table {
    let mut t = Table::new(&GAP_HEADER);
    for g in gs {
        t.push(vec![
            g.snr.into(),
            g.p.into(),
            g.entropy.into(),
            g.g1.into(),
            g.g2.into(),
            g.gap.into(),
            g.lower_bound.into(),
            g.exact_mi.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(3.0, 12), "3");
        assert_eq!(fmt_sig(-0.25, 12), "-0.25");
        assert_eq!(fmt_sig(123456.789, 12), "123456.789");
        assert_eq!(fmt_sig(1e15, 12), "1e15");
        assert_eq!(fmt_sig(0.1 + 0.2, 12), "0.3");
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), 1.5.into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n\"x,y\",1.5\n");
    }
}
