//! Exact rationals and their textual form (`"p/q"`, decimals, or JSON numbers).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    let num = BigInt::from_str(text).map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}

/// Exact value of a finite float.
pub fn rational_from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value).ok_or_else(|| Error::Domain(format!("non-finite value {value}")))
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(2), k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn in_unit_interval(value: &BigRational) -> bool {
    !value.is_negative() && *value <= BigRational::one()
}

/// A rational that serializes as `"p/q"` and deserializes from a string or a number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

impl From<BigRational> for Rat {
    fn from(value: BigRational) -> Self {
        Rat(value)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Rat)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"p/q\", a decimal string, or a number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rat, E> {
                rational_from_f64(v).map(Rat).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(
            parse_rational("1/4").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("-1.5").unwrap(),
            BigRational::new((-3).into(), 2.into())
        );
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn serde_forms() {
        let r: Rat = serde_json::from_str("\"3/16\"").unwrap();
        assert_eq!(r, Rat::new(3, 16));
        let r: Rat = serde_json::from_str("0.5").unwrap();
        assert_eq!(r, Rat::new(1, 2));
        let r: Rat = serde_json::from_str("2").unwrap();
        assert_eq!(r, Rat::new(2, 1));
        assert_eq!(serde_json::to_string(&Rat::new(6, 8)).unwrap(), "\"3/4\"");
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2(3), BigRational::from_integer(8.into()));
        assert_eq!(pow2(-2), BigRational::new(1.into(), 4.into()));
        assert_eq!(pow2(0), BigRational::one());
    }
}
