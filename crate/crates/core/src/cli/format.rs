//! Number formatting shared by the text, CSV and Markdown outputs.

use crate::linalg::RealVector;

/// Decimal places for solution coordinates.
pub const SOLUTION_DECIMALS: usize = 8;

/// `(v1, v2, ...)` with eight decimals.
pub fn vector(v: &RealVector) -> String {
    format!("{v:.prec$}", prec = SOLUTION_DECIMALS)
}

/// Shortest round-trip representation, for starting points.
pub fn vector_exact(v: &RealVector) -> String {
    format!("{v}")
}

/// Two-decimal scientific notation in Rust's `e` syntax, e.g. `9.99e-16`.
pub fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

/// Two-decimal scientific notation as `d.dd×10^k`.
pub fn sci_pretty(x: f64) -> String {
    let s = sci(x);
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{mantissa}×10^{exp}"),
        None => s,
    }
}

pub fn coc(q: f64) -> String {
    format!("{q:.4}")
}

/// Parses a `(v1, v2, ...)` string back into a vector.
pub fn parse_vector(s: &str) -> Option<RealVector> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let values: Result<Vec<f64>, _> = inner.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.ok()?;
    (!values.is_empty()).then(|| RealVector::new(values))
}

/// Parses a comma-separated list of floats, as given to `--x0`.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
                .and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(format!("`{t}` is not finite"))
                    }
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific() {
        assert_eq!(sci(9.99e-16), "9.99e-16");
        assert_eq!(sci(1.1102230246251565e-15), "1.11e-15");
        assert_eq!(sci_pretty(1.33e-15), "1.33×10^-15");
        assert_eq!(sci(0.0), "0.00e0");
        assert_eq!(sci_pretty(0.0), "0.00×10^0");
    }

    #[test]
    fn vectors() {
        let v = RealVector::new(vec![1.488033871712585, -0.25]);
        assert_eq!(vector(&v), "(1.48803387, -0.25000000)");
        assert_eq!(parse_vector(&vector(&v)).unwrap().as_slice(), &[1.48803387, -0.25]);
        assert_eq!(vector_exact(&RealVector::new(vec![-2.5, 1.0])), "(-2.5, 1)");
        assert!(parse_vector("1, 2").is_none());
        assert!(parse_vector("()").is_none());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("-2.5,1, 1").unwrap(), vec![-2.5, 1.0, 1.0]);
        assert!(parse_list("1,x").is_err());
        assert!(parse_list("1,inf").is_err());
    }
}
