//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qu(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q`, and decimal numerators/denominators such as `7.1/33`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n = parse_decimal(num)?;
    let d = parse_decimal(den)?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(n / d)
}

fn parse_decimal(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(n, d);
    Ok(if neg { -v } else { v })
}

/// Exact rational as `p/q` (or `p` for integers).
pub fn fmt_exact(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal approximation with a fixed number of digits, computed exactly
/// (round half away from zero) so the output is platform independent.
pub fn fmt_decimal(x: &Q, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x.abs() * Q::from_integer(scale.clone());
    let rounded = (scaled + q(1, 2)).floor().to_integer();
    let int = &rounded / &scale;
    let frac = &rounded % &scale;
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// max over a possibly empty iterator, with an explicit value for the empty case.
pub fn max_or<'a, I: IntoIterator<Item = &'a Q>>(it: I, empty: Q) -> Q {
    let mut best: Option<Q> = None;
    for v in it {
        if best.as_ref().is_none_or(|b| v > b) {
            best = Some(v.clone());
        }
    }
    best.unwrap_or(empty)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_fractions() {
        assert_eq!(parse_rational("7.1/33").unwrap(), q(71, 330));
        assert_eq!(parse_rational("6/33").unwrap(), q(2, 11));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), qi(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_formatting_is_exact() {
        assert_eq!(fmt_decimal(&q(1, 3), 6), "0.333333");
        assert_eq!(fmt_decimal(&q(2, 3), 3), "0.667");
        assert_eq!(fmt_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(fmt_decimal(&qi(330), 2), "330.00");
        assert_eq!(fmt_exact(&q(71, 330)), "71/330");
        assert_eq!(fmt_exact(&qi(-4)), "-4");
    }
}
