//! Exact decision of `r_f^k = r^p`, i.e. whether `log r_f / log r` is
//! rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Minimal positive `(k, p)` with `r_f^k = r^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PowerRelation {
    pub k: u64,
    pub p: u64,
}

/// `log c / log a` for integers `a, c >= 2`, when rational.
///
/// Euclid on exponents: if `a^p = c^k` with `c > a` then `a | c`, so divide
/// out `a` as often as possible and recurse on the swapped remainder.
fn log_ratio(a: &BigInt, c: &BigInt) -> Option<Rational> {
    debug_assert!(*a > BigInt::one() && *c > BigInt::one());
    let mut rest = c.clone();
    let mut whole = 0i64;
    loop {
        let (q, r) = rest.div_rem(a);
        if !r.is_zero() {
            break;
        }
        rest = q;
        whole += 1;
    }
    let whole = Rational::from_integer(whole.into());
    if rest.is_one() {
        Some(whole)
    } else if rest > *a {
        None
    } else {
        log_ratio(&rest, a).map(|inner| whole + inner.recip())
    }
}

/// Decides whether `r_f` is a rational power of `r`; both must lie in
/// `(0, 1)`. Returns the minimal relation, or `None` when
/// `log r_f / log r` is irrational.
pub fn log_commensurability(r: &Rational, r_f: &Rational) -> Result<Option<PowerRelation>> {
    for x in [r, r_f] {
        if !x.is_positive() || *x >= Rational::one() {
            return Err(Error::Invalid(format!(
                "ratios must lie in (0, 1), got {}",
                format_rational(x)
            )));
        }
    }
    // Lowest terms are unique, so r_f^k = r^p splits into numerators and
    // denominators separately.
    let q_den = log_ratio(r.denom(), r_f.denom());
    let q_num = match (r.numer().is_one(), r_f.numer().is_one()) {
        (true, true) => q_den.clone(),
        (false, false) => log_ratio(r.numer(), r_f.numer()),
        _ => None,
    };
    let q = match (q_num, q_den) {
        (Some(a), Some(b)) if a == b => a,
        _ => return Ok(None),
    };
    let (Some(p), Some(k)) = (q.numer().to_u64(), q.denom().to_u64()) else {
        return Ok(None);
    };
    Ok(Some(PowerRelation { k, p }))
}
