//! Exact positive reals of the form `base^exp` with rational base and exponent.
//!
//! Weighted quasinorms and `t ↦ t^{-N}` produce such values; they are
//! compared exactly by raising both sides to a common integer power.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::interval::Interval;
use crate::arith::rational::{fmt_rat, ln_rat, parse_rat};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct RootPower {
    base: Rational,
    exp: Rational,
}

fn rat_pow(x: &Rational, e: &BigInt) -> Rational {
    let k = e.abs().to_u32().expect("exponent too large");
    let p = Rational::new(num_traits::pow(x.numer().clone(), k as usize), num_traits::pow(x.denom().clone(), k as usize));
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

impl RootPower {
    pub fn new(base: Rational, exp: Rational) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::Invalid(format!("power base must be positive, got {}", fmt_rat(&base))));
        }
        Ok(RootPower { base, exp })
    }

    pub fn rational(x: Rational) -> Result<Self> {
        Self::new(x, Rational::one())
    }

    pub fn integer(n: impl Into<BigInt>) -> Result<Self> {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn exp(&self) -> &Rational {
        &self.exp
    }

    /// `self^e`.
    pub fn pow(&self, e: &Rational) -> Self {
        RootPower {
            base: self.base.clone(),
            exp: &self.exp * e,
        }
    }

    /// `base^{numer(exp)}` and the root index `denom(exp)`.
    fn radicand(&self) -> (Rational, u32) {
        let v = self.exp.denom().to_u32().expect("root index too large");
        (rat_pow(&self.base, self.exp.numer()), v)
    }

    pub fn ln(&self) -> f64 {
        ln_rat(&self.base) * self.exp.numer().to_f64().unwrap() / self.exp.denom().to_f64().unwrap()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// The exact value, if it is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        let (x, v) = self.radicand();
        let rn = x.numer().nth_root(v);
        let rd = x.denom().nth_root(v);
        (num_traits::pow(rn.clone(), v as usize) == *x.numer()
            && num_traits::pow(rd.clone(), v as usize) == *x.denom())
        .then(|| Rational::new(rn, rd))
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigInt {
        let (x, v) = self.radicand();
        x.floor().to_integer().nth_root(v)
    }

    /// Integer `r` and shift `k` with `r·2^{-k} <= self < (r+1)·2^{-k}`, `r` having
    /// roughly `bits` significant bits. Also reports whether the lower end is exact.
    fn bracket(&self, bits: u64) -> (BigInt, i64, bool) {
        let (x, v) = self.radicand();
        let log2x = x.numer().bits() as i64 - x.denom().bits() as i64;
        let k = bits as i64 - Integer::div_floor(&log2x, &(v as i64)) + 2;
        let shift = (k.unsigned_abs() * v as u64) as usize;
        let scaled = if k >= 0 {
            x * Rational::from_integer(BigInt::one() << shift)
        } else {
            x / Rational::from_integer(BigInt::one() << shift)
        };
        let y = scaled.floor().to_integer();
        let r = y.nth_root(v);
        let exact = scaled.is_integer() && num_traits::pow(r.clone(), v as usize) == y;
        (r, k, exact)
    }

    fn scaled(r: BigInt, k: i64) -> Rational {
        if k >= 0 {
            Rational::new(r, BigInt::one() << k as usize)
        } else {
            Rational::from_integer(r << k.unsigned_abs() as usize)
        }
    }

    /// A rational `<= self` with about `bits` bits of relative precision.
    pub fn lower_bound(&self, bits: u64) -> Rational {
        if let Some(x) = self.to_rational() {
            return x;
        }
        let (r, k, _) = self.bracket(bits);
        Self::scaled(r, k)
    }

    /// A rational `>= self` with about `bits` bits of relative precision.
    pub fn upper_bound(&self, bits: u64) -> Rational {
        if let Some(x) = self.to_rational() {
            return x;
        }
        let (r, k, exact) = self.bracket(bits);
        if exact {
            Self::scaled(r, k)
        } else {
            Self::scaled(r + 1, k)
        }
    }

    pub fn enclose(&self, bits: u64) -> Interval<Rational> {
        match self.to_rational() {
            Some(x) => Interval::point(x),
            None => Interval::new(self.lower_bound(bits), self.upper_bound(bits)).unwrap(),
        }
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        if !x.is_positive() {
            return Ordering::Greater;
        }
        self.cmp(&RootPower::rational(x.clone()).unwrap())
    }

    /// `"p/q"` when rational, otherwise `"p/q^a/b"`.
    pub fn to_exact_string(&self) -> String {
        match self.to_rational() {
            Some(x) => fmt_rat(&x),
            None => format!("{}^{}", fmt_rat(&self.base), fmt_rat(&self.exp)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once('^') {
            Some((b, e)) => Self::new(parse_rat(b)?, parse_rat(e)?),
            None => Self::rational(parse_rat(s)?),
        }
    }
}

impl PartialEq for RootPower {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RootPower {}

impl PartialOrd for RootPower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootPower {
    fn cmp(&self, other: &Self) -> Ordering {
        let (la, lb) = (self.ln(), other.ln());
        if (la - lb).abs() > 1e-9 * (la.abs() + lb.abs() + 1.0) {
            return la.partial_cmp(&lb).unwrap();
        }
        let l = self.exp.denom().lcm(other.exp.denom());
        let x = (self.exp.numer() * &l) / self.exp.denom();
        let y = (other.exp.numer() * &l) / other.exp.denom();
        // a^x vs b^y  <=>  a^x · b^{-y} vs 1
        let ratio = rat_pow(&self.base, &x) * rat_pow(&other.base, &-y);
        ratio.cmp(&Rational::one())
    }
}

impl fmt::Display for RootPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn rp(b: Rational, e: Rational) -> RootPower {
        RootPower::new(b, e).unwrap()
    }

    #[test]
    fn exact_comparisons() {
        // 2^{1/2} < 3^{1/3}? 2^3 = 8 < 9 = 3^2
        assert!(rp(int(2), rat(1, 2)) < rp(int(3), rat(1, 3)));
        // 4^{1/2} == 8^{1/3}
        assert_eq!(rp(int(4), rat(1, 2)), rp(int(8), rat(1, 3)));
        assert_eq!(rp(int(16), rat(1, 2)).to_rational(), Some(int(4)));
        assert_eq!(rp(int(2), rat(1, 2)).to_rational(), None);
        // near-ties that the float shortcut cannot separate
        let a = rp(int(1_000_000_007), rat(1, 2));
        let b = rp(int(1_000_000_008), rat(1, 2));
        assert!(a < b);
    }

    #[test]
    fn bounds_bracket_value() {
        let x = rp(int(2), rat(1, 2));
        let lo = x.lower_bound(64);
        let hi = x.upper_bound(64);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
        assert!((&hi - &lo) / &lo < rat(1, 1 << 60));
        let tiny = rp(int(3), rat(-6175, 4));
        let lo = tiny.lower_bound(64);
        assert!(tiny.cmp_rational(&lo) != Ordering::Less);
        assert_eq!(rp(int(9), rat(-1, 2)).lower_bound(64), rat(1, 3));
    }

    #[test]
    fn floors() {
        assert_eq!(rp(int(10), rat(1, 2)).floor(), BigInt::from(3));
        assert_eq!(rp(int(9), rat(1, 2)).floor(), BigInt::from(3));
        assert_eq!(rp(int(10), rat(3, 2)).floor(), BigInt::from(31));
        assert_eq!(rp(rat(1, 2), int(1)).floor(), BigInt::from(0));
    }

    #[test]
    fn parse_roundtrip() {
        let x = rp(int(2), rat(3, 4));
        assert_eq!(RootPower::parse(&x.to_exact_string()).unwrap(), x);
        assert_eq!(RootPower::parse("5/2").unwrap().to_exact_string(), "5/2");
    }
}
