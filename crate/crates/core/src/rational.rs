//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Always `p/q` with `q > 0` and `gcd(p, q) = 1`, including `q = 1`.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_pq(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Converts an exact integer-valued rational to `i64`, if it is one and fits.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if !r.denom().is_one() {
        return None;
    }
    i64::try_from(r.numer()).ok()
}

pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.denom().is_one() && !r.numer().is_negative()
}

/// serde adapter storing a rational as a `"p/q"` string.
pub mod serde_pq {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_pq(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_form_is_reduced() {
        assert_eq!(to_pq(&frac(4, -6)), "-2/3");
        assert_eq!(to_pq(&int(5)), "5/1");
        assert_eq!(to_pq(&int(0)), "0/1");
        assert_eq!(parse_pq("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse_pq("-7").unwrap(), int(-7));
        assert!(parse_pq("1/0").is_err());
        assert!(parse_pq("x").is_err());
    }
}
