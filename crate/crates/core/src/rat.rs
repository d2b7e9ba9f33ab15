//! Parsing and printing of exact rationals.
//!
//! Accepted input forms: a JSON integer, or a string `"p"` / `"p/q"` with
//! optional sign. Output is always in lowest terms with a positive
//! denominator, rendered `"p"` when the denominator is 1 and `"p/q"`
//! otherwise.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator {num_str:?}")))?;
    let denom: BigInt = den_str
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational denominator {den_str:?}")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn format_rational(r: &BigRational) -> String {
    // BigRational::new keeps values reduced with positive denominator.
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reads one matrix entry from a JSON value (integer or rational string).
pub fn rational_from_json(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Err(Error::Parse(format!("non-integer numeric entry {n}")))
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected rational entry, got {other}"))),
    }
}

pub fn rational_to_json(r: &BigRational) -> serde_json::Value {
    serde_json::Value::String(format_rational(r))
}

pub fn big(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_fractions() {
        assert_eq!(parse_rational("-3/6").unwrap(), big(-1) / big(2));
        assert_eq!(parse_rational("4").unwrap(), big(4));
        assert_eq!(parse_rational(" 7 / -14 ").unwrap(), big(-1) / big(2));
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(matches!(parse_rational("1/0"), Err(Error::Parse(_))));
    }

    #[test]
    fn formats_lowest_terms_positive_denominator() {
        let r = BigRational::new(BigInt::from(2), BigInt::from(-4));
        assert_eq!(format_rational(&r), "-1/2");
        assert_eq!(format_rational(&big(5)), "5");
    }
}
