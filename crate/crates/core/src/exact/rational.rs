use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`].
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical `"num/den"` rendering; integers keep the `/1`.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"a/b"`, an integer, a decimal literal such as `"-1.25"`, or a
/// power of ten written `"1e100"`. All forms are converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("cannot parse rational from {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let all = all / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `x^k` for any integer `k` (negative powers require `x != 0`).
pub fn pow_int(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    // Scale both parts down before converting so huge values do not overflow to NaN.
    let bits_n = x.numer().bits() as i64;
    let bits_d = x.denom().bits() as i64;
    let shift = (bits_n.max(bits_d) - 900).max(0) as usize;
    let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        // Denominator vanished in the shift: the value is huge.
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    n / d
}

/// Decimal rendering rounded to nearest (ties away from zero) at `digits` fractional digits.
pub fn rational_to_decimal(x: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.abs() * Rational::from_integer(scale.clone())).round().to_integer();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if x.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Serde adapter writing rationals as the canonical `"num/den"` string.
pub mod rational_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_rational(&rat(-6, 14)), "-3/7");
        assert_eq!(format_rational(&Rational::zero()), "0/1");
        assert_eq!(format_rational(&rat(4, 2)), "2/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/7").unwrap(), rat(-3, 7));
        assert_eq!(parse_rational("12").unwrap(), rat(12, 1));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("1e3").unwrap(), rat(1000, 1));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering_rounds() {
        assert_eq!(rational_to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(rational_to_decimal(&rat(-2, 3), 2), "-0.67");
        assert_eq!(rational_to_decimal(&rat(1, 100), 3), "0.010");
        assert_eq!(rational_to_decimal(&rat(7, 2), 0), "4");
        assert_eq!(rational_to_decimal(&rat(-1, 1000), 2), "0.00");
    }

    #[test]
    fn float_of_huge_values() {
        let big = pow_int(&rat(2, 1), 3000);
        assert!(to_f64(&big).is_infinite());
        let tiny = pow_int(&rat(1, 2), 3000) * Rational::from_integer(3.into());
        assert_eq!(to_f64(&tiny), 0.0);
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
