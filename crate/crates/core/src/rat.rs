//! Exact rational scalars and their serialized form.
//!
//! Rationals cross the JSON boundary as strings `"p/q"` (or `"p"` when the
//! denominator is one); bare JSON integers are also accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational used throughout the math core.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, or a decimal-free integer string.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::parse(format!("invalid rational: {t:?}"));
    match t.split_once('/') {
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((ns, ds)) => {
            let n: BigInt = ns.trim().parse().map_err(|_| bad())?;
            let d: BigInt = ds.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Canonical string form: `p/q`, or `p` when integral.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// The integer value of `r` when it fits in `i64`.
pub fn as_i64(r: &Rat) -> Option<i64> {
    if !is_integer(r) {
        return None;
    }
    let n = r.numer();
    if n.bits() >= 63 {
        return None;
    }
    let mut v = 0i64;
    for (i, limb) in n.iter_u64_digits().enumerate() {
        if i > 0 {
            return None;
        }
        v = limb as i64;
    }
    Some(if n.is_negative() { -v } else { v })
}

/// Serde adapter for a single rational rendered as a string.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let raw = RawRat::deserialize(d)?;
        raw.into_rat().map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rat).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw: Vec<RawRat> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rat().map_err(D::Error::custom))
            .collect()
    }
}

/// Accepts either a string ("3", "-4/7") or a bare integer.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RawRat {
    Int(i64),
    Str(String),
}

impl RawRat {
    pub(crate) fn into_rat(self) -> Result<Rat> {
        match self {
            RawRat::Int(v) => Ok(rat(v)),
            RawRat::Str(s) => parse_rat(&s),
        }
    }
}

/// Sum of a slice of rationals.
pub fn rat_sum<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Rat {
    let mut acc = Rat::zero();
    for v in it {
        acc += v;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-4", "1/2", "-7/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn i64_view() {
        assert_eq!(as_i64(&rat(-9)), Some(-9));
        assert_eq!(as_i64(&ratio(1, 2)), None);
    }
}
