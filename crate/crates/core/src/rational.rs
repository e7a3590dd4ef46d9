//! Exact rational scalars.
//!
//! Every probability, distance, density, and threshold in this crate is a
//! [`Rational`] kept in lowest terms with a positive denominator. There is no
//! floating point anywhere in the exact layer; equality assertions in tests
//! are genuine equalities, not tolerance checks.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

/// Arbitrary-precision rational number, normalized on construction.
pub type Rational = BigRational;

/// Builds `n / d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` for a nonnegative integer exponent.
pub fn rat_pow(base: &Rational, exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Renders in canonical form: `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p"` or `"p/q"` with optional sign; the result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let bad = || ParseRationalError(s.to_string());
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, q)) => {
            let n = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Absolute value.
pub fn rat_abs(q: &Rational) -> Rational {
    q.abs()
}
