//! Exact rational coefficients.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. The helpers here cover the
//! conversions and predicates the rest of the crate needs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p"` or `"p/q"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(from_bigint(s.parse().map_err(|_| bad())?)),
    }
}

/// Decimal string for integers, `p/q` otherwise. Never goes through floating point.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// True when `r` is an integer multiple of `d`.
pub fn divisible_by(r: &Rational, d: u64) -> bool {
    r.is_integer() && r.numer().is_multiple_of(&BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Serde adapter storing a rational as its canonical string.
pub mod as_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for lists of rationals.
pub mod vec_as_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(super::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(frac(6, -4), frac(-3, 2));
        assert_eq!(to_string(&frac(6, -4)), "-3/2");
        assert_eq!(to_string(&int(25050301099750)), "25050301099750");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-9/2", "31249534645239703150/7", "-21600703575/2"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn divisibility() {
        assert!(divisible_by(&int(25050301099750), 5));
        assert!(!divisible_by(&parse("31249534645239703150").unwrap(), 7));
        assert!(!divisible_by(&frac(9, 2), 1));
        assert!(divisible_by(&int(0), 7));
    }
}
