//! Exact scalars.
//!
//! All polygonal computations run on arbitrary-precision rationals. Floats
//! only enter through black-box norms, and convert to rationals exactly
//! (every finite `f64` is a dyadic rational).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn two() -> Rat {
    int(2)
}

/// Parses `"p/q"`, `"p"` or a plain decimal like `"0.75"`.
pub fn parse(text: &str) -> Result<Rat> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Malformed("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("bad numerator in {text:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("bad denominator in {text:?}")))?;
        if q.is_zero() {
            return Err(Error::Malformed(format!("zero denominator in {text:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Malformed(format!("bad decimal {text:?}")));
        }
        let num: BigInt = digits.parse().expect("checked digits");
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = s
        .parse()
        .map_err(|_| Error::Malformed(format!("not a rational: {text:?}")))?;
    Ok(Rat::from_integer(p))
}

/// Canonical `"p/q"` text (`"p"` for integers).
pub fn format(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Malformed(format!("non-finite value {x}")))
}

pub fn max(a: Rat, b: Rat) -> Rat {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min(a: Rat, b: Rat) -> Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rat;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}
