//! Exact rational scalars and their `p/q` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q` with an optional leading minus sign. Decimal points,
/// whitespace, a `+` sign, and zero denominators are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.chars().take(64).collect());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical form: reduced, denominator omitted when it is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Floor of log2 |r| computed from bit lengths; `None` for zero.
pub fn log2_floor_abs(r: &Rational) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    Some(n - d)
}

pub(crate) fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
