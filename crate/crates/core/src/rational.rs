//! Exact rational scalars and their text encoding.
//!
//! Every number in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. The text
//! encoding is `p/q`, or just `p` when the denominator is one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {t:?}: {e}")))
}

/// `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with at most `max_frac` fractional digits.
///
/// Exact whenever the expansion terminates within `max_frac` digits,
/// otherwise rounded half away from zero. Trailing zeros are trimmed.
pub fn to_decimal(r: &Rational, max_frac: usize) -> String {
    let negative = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(max_frac as u32);
    let scaled = abs.numer() * &scale;
    let (mut q, rem) = scaled.div_rem(abs.denom());
    if &rem * 2u32 >= *abs.denom() {
        q += 1u32;
    }
    let (int_part, frac_part) = q.div_rem(&scale);
    let mut frac = frac_part.to_string();
    while frac.len() < max_frac {
        frac.insert(0, '0');
    }
    let frac = frac.trim_end_matches('0');
    let sign = if negative && !(int_part.is_zero() && frac.is_empty()) {
        "-"
    } else {
        ""
    };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Integer power with a possibly negative exponent.
pub fn pow(r: &Rational, exp: i32) -> Rational {
    num_traits::pow::Pow::pow(r, exp)
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub fn max_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}
