//! Closed intervals over an ordered field.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::{fmt_rat, parse_rat, to_decimal};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid(format!("empty interval [{lo:?}, {hi:?}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: T) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Builds the hull of two values in either order.
    pub fn hull(a: T, b: T) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn into_bounds(self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        T::midpoint(&self.lo, &self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `x` lies in the open interval `(lo, hi)`.
    pub fn contains_strictly(&self, x: &T) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&T::zero())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` ⊂ interior of `other`, with strict inequalities at both ends.
    pub fn is_strictly_inside(&self, other: &Self) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.clone() + other.lo.clone(),
            hi: self.hi.clone() + other.hi.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.clone() - other.hi.clone(),
            hi: self.hi.clone() - other.lo.clone(),
        }
    }

    pub fn shift(&self, c: &T) -> Self {
        Interval {
            lo: self.lo.clone() + c.clone(),
            hi: self.hi.clone() + c.clone(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::hull(self.lo.clone() * c.clone(), self.hi.clone() * c.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            self.lo.clone() * other.lo.clone(),
            self.lo.clone() * other.hi.clone(),
            self.hi.clone() * other.lo.clone(),
            self.hi.clone() * other.hi.clone(),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Interval { lo, hi }
    }
}

impl Interval<Rational> {
    /// `["p/q","r/s"]` rendering used in JSON.
    pub fn to_strings(&self) -> [String; 2] {
        [fmt_rat(&self.lo), fmt_rat(&self.hi)]
    }

    pub fn from_strings(lo: &str, hi: &str) -> Result<Self> {
        Self::new(parse_rat(lo)?, parse_rat(hi)?)
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            to_decimal(&self.lo, digits, false),
            to_decimal(&self.hi, digits, true)
        )
    }
}

impl fmt::Display for Interval<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

impl Serialize for Interval<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        Self::from_strings(&lo, &hi).map_err(serde::de::Error::custom)
    }
}
