//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The coefficient field: arbitrary-precision rationals.
pub type Q = BigRational;

/// Shorthand for a rational from two machine integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn qi(num: i64) -> Q {
    Q::from(BigInt::from(num))
}

/// Renders a rational as `p` or `p/q` with a reduced positive denominator.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` with optional sign and surrounding whitespace.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Validation(format!("invalid rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Renders with an explicit leading sign, as used inside Laurent strings.
pub fn format_q_signed(x: &Q) -> String {
    if x.is_negative() {
        format!("- {}", format_q(&-x.clone()))
    } else {
        format!("+ {}", format_q(x))
    }
}
