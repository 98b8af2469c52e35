//! Scalar abstractions.
//!
//! Interval arithmetic, polynomials and bisection are written against
//! [`Scalar`], an ordered field. Everything that ends up in a certificate
//! is instantiated with [`crate::Rational`]; `f64` instantiations exist for
//! display and quick estimates only.
//!
//! The lattice enumeration kernel is generic over [`GridInt`], an integer
//! type wide enough to hold scaled coordinates: `i128` on the fast path and
//! `BigInt` when the numbers do not fit.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {
    fn half(&self) -> Self {
        self.clone() / Self::from_u8(2).unwrap()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()).half()
    }
}

impl<T> Scalar for T where T: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {}

/// Signed integers used by the enumeration kernel.
pub trait GridInt:
    Clone + Debug + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl GridInt for i128 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl GridInt for BigInt {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}
