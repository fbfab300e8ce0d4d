//! Exact rational helpers shared across the crate.
//!
//! Exponents, inner products and phases use [`Q`] (a 64-bit ratio); series
//! coefficients and matrix entries that can grow use [`BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Canonical `"p/q"` rendering (`"p"` when integral).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_big(x: &BigRational) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, d))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// Representative of `x` in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn big_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn modp(a: i64, m: i64) -> i64 {
    a.mod_floor(&m)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

pub fn big_is_nonneg_integer(x: &BigRational) -> bool {
    x.is_integer() && !x.is_negative()
}

pub fn big_one() -> BigRational {
    BigRational::one()
}

pub fn big_zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-4").unwrap(), qi(-4));
        assert_eq!(fmt_q(&q(-3, 9)), "-1/3");
        assert_eq!(fmt_q(&qi(5)), "5");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&q(-1, 3)), q(2, 3));
        assert_eq!(frac(&q(7, 2)), q(1, 2));
    }
}
