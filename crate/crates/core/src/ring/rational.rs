//! Exact rationals and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
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

/// Canonical `"num/den"` form. The denominator is always written, so the
/// string is a fixed function of the value.
pub fn to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::parse(text.to_string(), "expected a rational of the form num/den");
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(text.to_string(), "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_reduced() {
        let r = ratio(6, -4);
        assert_eq!(to_text(&r), "-3/2");
        assert_eq!(to_text(&rat(5)), "5/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0/1", "-7/3", "12/1"] {
            assert_eq!(to_text(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("4").unwrap(), rat(4));
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(5), rat(120));
    }
}
