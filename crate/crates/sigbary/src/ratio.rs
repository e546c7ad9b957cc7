//! Formatting and parsing of rationals as `"p/q"` strings, the wire format
//! used by every JSON artifact in this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical form: always `numerator/denominator` of the reduced fraction,
/// with the sign on the numerator ("0/1", "-3/4").
pub(crate) fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts either "p/q" or a bare integer "p".
pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::BadRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
