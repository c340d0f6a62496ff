//! Column-table assembly and CSV formatting.
//!
//! All numeric output uses [`fmt_sig`]: fixed-point with the decimal
//! count chosen so that nine significant digits survive. The formatting
//! is a pure function of the value, so identical inputs always serialize
//! byte-identically.

/// Format with nine significant digits in plain fixed-point notation.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let dec = (8 - mag).max(0) as usize;
    format!("{x:.dec$}")
}

/// An ordered set of equally long named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { columns: headers.iter().map(|h| (h.to_string(), Vec::new())).collect() }
    }

    /// Append one row; the slice length must match the column count.
    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        for (col, &v) in self.columns.iter_mut().zip(row.iter()) {
            col.1.push(v);
        }
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    /// Render as CSV: header line then one line per row, `\n` endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let headers: Vec<&str> = self.columns.iter().map(|c| c.0.as_str()).collect();
        out.push_str(&headers.join(","));
        out.push('\n');
        for r in 0..self.n_rows() {
            let mut first = true;
            for (_, col) in &self.columns {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&fmt_sig(col[r]));
            }
            out.push('\n');
        }
        out
    }
}
