//! Parsing of command-line values.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use lieflow::matrix::QMatrix;
use lieflow::rational::{format_rational, parse_rational_lenient, Rational};

/// Parses one exact value, warning on stderr when a decimal had to be converted.
pub fn rational(text: &str) -> Result<Rational> {
    let (value, decimal) = parse_rational_lenient(text).with_context(|| format!("invalid number `{text}`"))?;
    if decimal {
        eprintln!(
            "warning: decimal `{}` read as the exact rational {}; write p/q to state exact values",
            text.trim(),
            format_rational(&value)
        );
    }
    Ok(value)
}

/// Entries separated by commas, semicolons or whitespace.
pub fn rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split([',', ';', ' ', '\t', '\n'])
        .filter(|s| !s.trim().is_empty())
        .map(rational)
        .collect()
}

pub fn square_matrix(text: &str, n: usize) -> Result<QMatrix> {
    let entries = rational_list(text)?;
    if entries.len() != n * n {
        bail!("expected {} matrix entries for dimension {n}, got {}", n * n, entries.len());
    }
    Ok(QMatrix::from_row_major(n, n, entries))
}

pub fn vector(text: &str, n: usize) -> Result<Vec<Rational>> {
    let entries = rational_list(text)?;
    if entries.len() != n {
        bail!("expected {n} coordinates, got {}", entries.len());
    }
    Ok(entries)
}

/// Reads `pi`, `2pi`, `2*pi`, `pi/2`, `3pi/4` or a plain positive number.
pub fn period(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let value = match s.find("pi") {
        Some(idx) => {
            let head = s[..idx].trim_end_matches('*');
            let coeff = match head {
                "" => 1.0,
                _ => head.parse::<f64>().with_context(|| format!("invalid period `{text}`"))?,
            };
            let tail = &s[idx + 2..];
            let div = match tail.strip_prefix('/') {
                Some(d) => d.parse::<f64>().with_context(|| format!("invalid period `{text}`"))?,
                None if tail.is_empty() => 1.0,
                None => bail!("invalid period `{text}`"),
            };
            coeff * PI / div
        }
        None => s.parse::<f64>().with_context(|| format!("invalid period `{text}`"))?,
    };
    if !(value.is_finite() && value > 0.0) {
        bail!("period must be positive and finite, got `{text}`");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lieflow::rational::frac;

    #[test]
    fn periods() {
        assert_eq!(period("pi").unwrap(), PI);
        assert_eq!(period("2pi").unwrap(), 2.0 * PI);
        assert_eq!(period("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(period("pi/2").unwrap(), PI / 2.0);
        assert_eq!(period("3pi/4").unwrap(), 0.75 * PI);
        assert_eq!(period("1.0").unwrap(), 1.0);
        assert!(period("-pi").is_err());
        assert!(period("pie").is_err());
        assert!(period("0").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(rational_list("1, -1/2;3").unwrap(), vec![frac(1, 1), frac(-1, 2), frac(3, 1)]);
        assert_eq!(rational_list("0.25").unwrap(), vec![frac(1, 4)]);
        assert!(square_matrix("1,2,3", 2).is_err());
        assert!(rational_list("1,x").is_err());
    }
}
