//! Exact rational numbers and their textual forms.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q`, an integer, or a decimal string. Decimals are read exactly as
/// `digits / 10^k`; no binary floating point is involved.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Format(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Parses a comma-separated list of rationals.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse).collect()
}

/// `p/q`, or just `p` for integers.
pub fn fmt(value: &Rational) -> String {
    value.to_string()
}

pub fn fmt_list(values: &[Rational]) -> String {
    values.iter().map(fmt).collect::<Vec<_>>().join(",")
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Binomial coefficient as an exact integer rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
