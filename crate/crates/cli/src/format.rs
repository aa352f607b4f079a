//! Text formats: fixed-width scientific floats, CSV tables, raw matrix files.

use std::fmt::Write as _;

use dephaselab_core::analysis::SweepResult;
use dephaselab_core::qmat::CMat4;

use crate::error::{CliError, Result};

/// `printf("%.9e")`: ten significant digits, signed exponent of at least two digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn push_row(out: &mut String, cells: impl IntoIterator<Item = f64>) {
    let row: Vec<String> = cells.into_iter().map(sci).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// Provenance as `# key: value` lines, then a header and one row per grid point.
pub fn sweep_csv(s: &SweepResult) -> String {
    let mut out = String::new();
    for (k, v) in &s.provenance {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out.push_str(&s.axis);
    for c in &s.columns {
        out.push(',');
        out.push_str(&c.name);
    }
    out.push('\n');
    for (i, &x) in s.grid.iter().enumerate() {
        push_row(&mut out, std::iter::once(x).chain(s.columns.iter().map(|c| c.values[i])));
    }
    out
}

/// Column names of a row-major state dump, `re_00,im_00,...,re_33,im_33`.
pub fn state_columns() -> impl Iterator<Item = String> {
    (0..16).flat_map(|k| {
        let (i, j) = (k / 4, k % 4);
        [format!("re_{i}{j}"), format!("im_{i}{j}")]
    })
}

/// Streaming CSV body; callers push header and rows.
#[derive(Debug, Default)]
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn header(&mut self, names: impl IntoIterator<Item = String>) {
        let names: Vec<String> = names.into_iter().collect();
        self.out.push_str(&names.join(","));
        self.out.push('\n');
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = f64>) {
        push_row(&mut self.out, cells);
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// 32 reals (row-major, real then imaginary part of each entry) separated by
/// whitespace or commas; `#` starts a comment.
pub fn parse_raw_matrix(text: &str) -> Result<CMat4> {
    let mut v = Vec::with_capacity(32);
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let x: f64 = tok.parse().map_err(|_| CliError::invalid(format!("matrix file: cannot parse `{tok}`")))?;
            if !x.is_finite() {
                return Err(CliError::invalid(format!("matrix file: non-finite entry `{tok}`")));
            }
            v.push(x);
        }
    }
    let arr: [f64; 32] = v
        .try_into()
        .map_err(|v: Vec<f64>| CliError::invalid(format!("matrix file: expected 32 reals, found {}", v.len())))?;
    Ok(CMat4::from_interleaved(&arr))
}
