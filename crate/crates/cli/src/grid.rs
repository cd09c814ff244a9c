//! Sweep grids: `1,10,100` or `log:lo:hi:n`.

use crate::error::CliError;

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let bad = |why: &str| CliError::Config(format!("grid `{text}`: {why}"));
    let values = if let Some(rest) = text.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected log:lo:hi:n"));
        }
        let lo = parse_value(parts[0]).map_err(|_| bad("bad lower end"))?;
        let hi = parse_value(parts[1]).map_err(|_| bad("bad upper end"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad("bad point count"))?;
        if !(lo > 0.0 && hi >= lo) {
            return Err(bad("need 0 < lo <= hi"));
        }
        match n {
            0 => return Err(bad("point count must be positive")),
            1 => vec![lo],
            _ => {
                let (a, b) = (lo.ln(), hi.ln());
                (0..n)
                    .map(|k| match k {
                        0 => lo,
                        k if k == n - 1 => hi,
                        k => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
                    })
                    .collect()
            }
        }
    } else {
        text.split(',').map(|s| parse_value(s).map_err(|_| bad(&format!("bad value `{}`", s.trim())))).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty"));
    }
    Ok(values)
}

fn parse_value(s: &str) -> Result<f64, ()> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(()),
    }
}

/// `a,b` window.
pub fn parse_window(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("window `{text}`: expected a,b with a < b"));
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(bad());
    }
    let a = parse_value(parts[0]).map_err(|_| bad())?;
    let b = parse_value(parts[1]).map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}
