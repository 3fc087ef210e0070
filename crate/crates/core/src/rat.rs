//! Exact rational numbers and their textual forms.
//!
//! All geometry in this crate is done over [`Rat`]. The canonical text
//! form is `"num/den"` with the denominator always written, so `3` is
//! `"3/1"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"num/den"`, denominator always present.
pub fn to_exact_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"-1.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Validation(format!("cannot parse rational '{s}'")));
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole = if ip.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(ip).map_err(|_| Error::Validation(format!("cannot parse rational '{s}'")))?
        };
        let frac = BigInt::from_str(fp).map_err(|_| Error::Validation(format!("cannot parse rational '{s}'")))?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = Rat::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    let r = Rat::from_str(t).map_err(|_| Error::Validation(format!("cannot parse rational '{s}'")))?;
    Ok(r)
}

/// Decimal rendering with `digits` fractional digits, rounded half away from zero.
/// Computed from the exact value, never through floating point.
pub fn to_decimal_string(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rat::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2;
    let q = if &twice >= scaled.denom() { q + 1 } else { q };
    let (ip, fp) = q.div_rem(&scale);
    let sign = if r.is_negative() && !(ip.is_zero() && fp.is_zero()) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{ip}");
    }
    let fp = fp.to_string();
    format!("{sign}{ip}.{}{fp}", "0".repeat(digits - fp.len()))
}

pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_to_i64(r: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_i64().expect("floor fits in i64")
}

/// `(numerator, denominator)` when both fit in an `i64`.
pub fn to_i64_pair(r: &Rat) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub mod serde_rat {
    //! serde adapter storing a [`Rat`] as its `"num/den"` string.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_exact_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            S(String),
            I(i64),
        }
        match Repr::deserialize(d)? {
            Repr::S(s) => parse_rat(&s).map_err(serde::de::Error::custom),
            Repr::I(i) => Ok(int(i)),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&to_exact_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum Repr {
                S(String),
                I(i64),
            }
            let raw: Vec<Repr> = Vec::deserialize(d)?;
            raw.into_iter()
                .map(|r| match r {
                    Repr::S(s) => parse_rat(&s).map_err(serde::de::Error::custom),
                    Repr::I(i) => Ok(int(i)),
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_strings() {
        assert_eq!(to_exact_string(&int(3)), "3/1");
        assert_eq!(to_exact_string(&rat(6, -8)), "-3/4");
        assert_eq!(parse_rat("49/16").unwrap(), rat(49, 16));
        assert_eq!(parse_rat("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rat(" 7 ").unwrap(), int(7));
        assert!(parse_rat("x/2").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat(49, 16), 4), "3.0625");
        assert_eq!(to_decimal_string(&rat(1, 3), 6), "0.333333");
        assert_eq!(to_decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(to_decimal_string(&rat(-1, 2), 2), "-0.50");
        assert_eq!(to_decimal_string(&rat(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal_string(&int(3), 0), "3");
    }
}
