//! Exact rational arithmetic helpers.
//!
//! All certificate-relevant arithmetic in this crate is exact; floating
//! point appears only in eigenvalue reports. The underlying representation
//! is an arbitrary-precision reduced fraction with positive denominator.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, always stored fully reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from small integers. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Render as `"p/q"`, or `"p"` when the value is an integer.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let make_err = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| make_err())?;
            let q: BigInt = q.trim().parse().map_err(|_| make_err())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| make_err())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Nearest double-precision value.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for magnitudes outside f64 range.
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse_roundtrip() {
        for (p, q) in [(1, 2), (-3, 4), (7, 1), (0, 5), (22, 7)] {
            let r = rat(p, q);
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn parse_normalizes_sign_and_gcd() {
        assert_eq!(parse_rational("6/-8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational(" 10/5 ").unwrap(), rat_int(2));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(to_f64(&rat(1, 2)), 0.5);
        assert!((to_f64(&rat(13, 2360)) - 0.005508474576271186).abs() < 1e-15);
    }
}
