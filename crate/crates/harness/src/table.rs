//! In-memory CSV tables and cell formatting.
//!
//! Reals are written with 6 significant digits using `.` as the decimal
//! separator, switching to scientific notation outside `[1e-4, 1e6)`.
//! Undefined values are written as `NA`; missing standard errors as empty
//! cells.

use std::io::Write;

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    /// # Panics
    ///
    /// If the row width does not match the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    /// Cell by row index and column name.
    pub fn cell(&self, row: usize, name: &str) -> Option<&str> {
        let col = self.column(name)?;
        self.rows.get(row).map(|r| r[col].as_str())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("cells are UTF-8")
    }
}

/// Formats a real with 6 significant digits.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let ax = x.abs();
    if !(1e-4..1e6).contains(&ax) {
        return format!("{x:.5e}");
    }
    let mag = ax.log10().floor() as i32;
    let s = fixed(x, mag);
    // rounding can carry into the next decade (9.999996 -> 10.00000)
    let rounded: f64 = s.parse().expect("formatted float");
    if rounded.abs() >= 10f64.powi(mag + 1) {
        fixed(x, mag + 1)
    } else {
        s
    }
}

fn fixed(x: f64, mag: i32) -> String {
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `NA` for undefined values.
pub fn real_or_na(x: Option<f64>) -> String {
    x.map(real).unwrap_or_else(|| "NA".to_string())
}

/// Empty cell for absent values.
pub fn real_or_empty(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

pub fn int<T: ToString>(x: T) -> String {
    x.to_string()
}
