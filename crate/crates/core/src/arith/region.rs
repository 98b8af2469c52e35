//! Axis-parallel closed rational boxes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{RatInterval, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<RatInterval>", into = "Vec<RatInterval>")]
pub struct RatBox {
    intervals: Vec<RatInterval>,
}

impl TryFrom<Vec<RatInterval>> for RatBox {
    type Error = Error;

    fn try_from(v: Vec<RatInterval>) -> Result<Self> {
        RatBox::new(v)
    }
}

impl From<RatBox> for Vec<RatInterval> {
    fn from(b: RatBox) -> Self {
        b.intervals
    }
}

/// A box written over one denominator: `ξ_j ∈ [lo_j / den, hi_j / den]`.
#[derive(Clone, Debug)]
pub struct IntegerBox {
    pub den: BigInt,
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
}

impl RatBox {
    pub fn new(intervals: Vec<RatInterval>) -> Result<Self> {
        if intervals.len() < 2 {
            return Err(Error::BadDims(format!(
                "boxes need n >= 2 coordinates, got {}",
                intervals.len()
            )));
        }
        Ok(RatBox { intervals })
    }

    pub fn dims(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[RatInterval] {
        &self.intervals
    }

    pub fn interval(&self, j: usize) -> &RatInterval {
        &self.intervals[j]
    }

    pub fn with_interval(&self, j: usize, iv: RatInterval) -> Self {
        let mut b = self.clone();
        b.intervals[j] = iv;
        b
    }

    pub fn widths(&self) -> Vec<Rational> {
        self.intervals.iter().map(|i| i.width()).collect()
    }

    pub fn midpoint(&self) -> Vec<Rational> {
        self.intervals.iter().map(|i| i.midpoint()).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dims() && self.intervals.iter().zip(x).all(|(i, v)| i.contains(v))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.is_subset_of(b))
    }

    /// Every coordinate interval sits in the interior of `other`'s.
    pub fn is_strictly_inside(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.is_strictly_inside(b))
    }

    /// All `2^n` corners, first coordinate varying slowest.
    pub fn corners(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![Vec::new()];
        for iv in &self.intervals {
            out = out
                .into_iter()
                .flat_map(|c| {
                    [iv.lo(), iv.hi()].into_iter().map(move |e| {
                        let mut c = c.clone();
                        c.push(e.clone());
                        c
                    })
                })
                .collect();
        }
        out
    }

    pub fn integer_form(&self) -> IntegerBox {
        let mut den = BigInt::one();
        for iv in &self.intervals {
            den = den.lcm(iv.lo().denom()).lcm(iv.hi().denom());
        }
        let scale = |x: &Rational| x.numer() * (&den / x.denom());
        IntegerBox {
            lo: self.intervals.iter().map(|i| scale(i.lo())).collect(),
            hi: self.intervals.iter().map(|i| scale(i.hi())).collect(),
            den: den.clone(),
        }
    }
}

impl fmt::Display for RatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" × "))
    }
}
