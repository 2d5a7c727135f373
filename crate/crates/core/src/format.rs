//! Number formatting for CSV output.

use std::io::{self, Write};

/// Significant digits written by [`fmt_g`].
pub const SIG_DIGITS: usize = 12;

/// C-style `%.12g`: fixed or exponent notation, whichever is shorter for
/// the magnitude, trailing zeros removed. Always uses `.` as separator.
pub fn fmt_g(x: f64) -> String {
    fmt_g_prec(x, SIG_DIGITS)
}

pub fn fmt_g_prec(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes comma-separated rows under a header.
pub struct CsvWriter<W: Write> {
    out: W,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out, columns: header.len() })
    }

    pub fn row(&mut self, values: &[f64]) -> io::Result<()> {
        debug_assert_eq!(values.len(), self.columns);
        let line: Vec<String> = values.iter().map(|v| fmt_g(*v)).collect();
        writeln!(self.out, "{}", line.join(","))
    }

    /// Row whose first column is text.
    pub fn row_labeled(&mut self, label: &str, values: &[f64]) -> io::Result<()> {
        debug_assert_eq!(values.len() + 1, self.columns);
        let mut line = vec![label.to_string()];
        line.extend(values.iter().map(|v| fmt_g(*v)));
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
