//! Exact rational numbers and the fraction-string format used in all I/O.
//!
//! Values cross the process boundary as strings like `"3/10"`, `"2"` or
//! `"-0.25"`; binary floats never appear. Parsing is lossless and
//! formatting is canonical (reduced, `n` when the denominator is 1,
//! `n/d` otherwise), so parse-format round-trips are identical.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand constructor for small integers.
pub fn rint(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// 2^exp as a rational, for the lower-bound tree's edge lengths.
pub fn pow2(exp: u32) -> Rational {
    Rational::from_integer(BigInt::one() << exp)
}

/// value / 2^64 — the exact unit-interval embedding of a raw draw.
pub fn unit_from_u64(value: u64) -> Rational {
    Rational::new(BigInt::from(value), BigInt::one() << 64)
}

/// Canonical fraction-string form: `"2"`, `"-3/10"`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"a/b"`, an integer string, or a finite decimal such as
/// `"0.25"`. Decimals convert exactly (digits over a power of ten).
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = denom
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let joined = format!("{int_digits}{frac_part}");
        let numer: BigInt = joined
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Rational::new(BigInt::from(sign) * numer, denom));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// `value mod modulus`, normalized into `[0, modulus)`. Requires a
/// positive modulus.
pub fn rem_euclid(value: &Rational, modulus: &Rational) -> Rational {
    debug_assert!(modulus.is_positive());
    let q = (value / modulus).floor();
    value - q * modulus
}

/// Serde adapter serializing rationals as fraction strings.
pub mod fraction_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/10").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational("4").unwrap(), rint(4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 2/6 ").unwrap(), rat(1, 3));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "1/0", "a/b", "1.2.3", "0x10", "1e3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rint(-3)), "-3");
        assert_eq!(format_rational(&rat(9, 3)), "3");
    }

    #[test]
    fn format_parse_round_trip() {
        for (n, d) in [(0, 1), (1, 3), (-5, 7), (22, 11), (100, 3)] {
            let r = rat(n, d);
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn rem_euclid_wraps_into_range() {
        let c = rint(1);
        assert_eq!(rem_euclid(&rat(3, 2), &c), rat(1, 2));
        assert_eq!(rem_euclid(&rat(-1, 4), &c), rat(3, 4));
        assert_eq!(rem_euclid(&rint(2), &c), rint(0));
    }
}
