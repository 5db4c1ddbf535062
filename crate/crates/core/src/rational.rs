//! Exact rational scalars.
//!
//! Every number in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::{Error, Result};

/// Builds `num / den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Renders `r` as an `a/b` string; integers keep an explicit `/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short human form: `1/4`, `0`, `1`.
pub fn short(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b`, `a` or `-a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidProfile(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn sum<'a>(items: impl IntoIterator<Item = &'a Rational>) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}
