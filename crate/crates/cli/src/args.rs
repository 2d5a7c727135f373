use anyhow::{anyhow, bail, Context, Result};
use gurlab::scan::Axis;
use gurlab::Complex64;

/// `re,im` or a bare real number.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.parse().with_context(|| format!("not a number: {s:?}"))?;
        if !v.is_finite() {
            bail!("not finite: {s:?}");
        }
        Ok(v)
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => bail!("expected re,im but got {text:?}"),
    }
}

/// `n1xn2`, or `n` for a one-dimensional grid.
pub fn parse_grid(text: &str) -> Result<(usize, Option<usize>)> {
    let n = |s: &str| -> Result<usize> {
        let v: usize = s.trim().parse().with_context(|| format!("grid size {s:?} is not a positive integer"))?;
        if v == 0 {
            bail!("grid size must be positive");
        }
        Ok(v)
    };
    match text.split_once(['x', 'X']) {
        Some((a, b)) => Ok((n(a)?, Some(n(b)?))),
        None => Ok((n(text)?, None)),
    }
}

/// `name=lo:hi`
pub fn parse_axis(text: &str, points: usize) -> Result<Axis> {
    let (name, range) = text.split_once('=').ok_or_else(|| anyhow!("expected name=lo:hi, got {text:?}"))?;
    let (lo, hi) = range.split_once(':').ok_or_else(|| anyhow!("expected name=lo:hi, got {text:?}"))?;
    let lo = parse_real(lo)?;
    let hi = parse_real(hi)?;
    Ok(Axis::new(name.trim(), lo, hi, points))
}

/// `name=re,im`
pub fn parse_binding(text: &str) -> Result<(String, Complex64)> {
    let (name, value) = text.split_once('=').ok_or_else(|| anyhow!("expected name=re,im, got {text:?}"))?;
    Ok((name.trim().to_string(), parse_complex(value)?))
}

/// Real number, also accepting `pi`, `2pi`, `pi/2`, `3pi/2` style values.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let pi = std::f64::consts::PI;
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, parse_real(b)?),
        None => (t, 1.0),
    };
    let num = match num.strip_suffix("pi") {
        Some("") => pi,
        Some("-") => -pi,
        Some(k) => k.trim_end_matches('*').parse::<f64>().with_context(|| format!("bad number {text:?}"))? * pi,
        None => bail!("bad number {text:?}"),
    };
    Ok(num / den)
}
