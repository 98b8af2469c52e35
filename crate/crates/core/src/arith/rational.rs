//! Helpers around [`Rational`]: parsing, formatting, nearest-integer distance.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// ⟨x⟩, the distance from `x` to the nearest integer. Always in `[0, 1/2]`.
pub fn nearest_int_dist(x: &Rational) -> Rational {
    let frac = x - x.floor();
    let other = Rational::one() - &frac;
    if frac <= other {
        frac
    } else {
        other
    }
}

/// `2^k` as a rational, negative `k` allowed.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Formats as `p/q` with `q >= 1`; integers keep the `/1`.
pub fn fmt_rat(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q`, a plain integer, or a decimal such as `0.125` or `1e-9`.
pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let shift = exp - frac.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, shift.unsigned_abs() as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Decimal rendering with `digits` fractional digits, rounded toward −∞
/// (`round_up = false`) or +∞ (`round_up = true`). Display only.
pub fn to_decimal(x: &Rational, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * Rational::from_integer(scale.clone());
    let n = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.is_negative();
    let (q, r) = n.abs().div_rem(&scale);
    let body = if digits == 0 {
        q.to_string()
    } else {
        format!("{}.{:0>width$}", q, r.to_string(), width = digits)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Natural logarithm of a positive big integer, as an `f64` estimate.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational, as an `f64` estimate.
pub fn ln_rat(x: &Rational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rat(&x.abs()).exp()
}

/// `p/q` when short, otherwise `~2^e`; for messages.
pub fn fmt_magnitude(x: &Rational) -> String {
    if x.numer().bits() + x.denom().bits() <= 128 || x.is_zero() {
        fmt_rat(x)
    } else {
        format!("~2^{}", log2_estimate(x))
    }
}

/// Rough `log2 |x|` from bit lengths; exact to within ±1.
pub fn log2_estimate(x: &Rational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Serde adapters: rationals as `"p/q"` strings, big integers as JSON numbers.
pub mod serde_rat {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rat, parse_rat};
    use crate::Rational;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }

    pub mod opt {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{fmt_rat, parse_rat};
        use crate::Rational;

        pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_str(&fmt_rat(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use super::super::{fmt_rat, parse_rat};
        use crate::Rational;

        pub fn serialize<S: Serializer>(x: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            x.iter().map(fmt_rat).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

pub mod serde_bigint {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let n = Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(d)?;
        BigInt::from_str(&n.to_string()).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use num_bigint::BigInt;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super")] BigInt);

        pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            x.iter().map(|v| Wrap(v.clone())).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }
}
