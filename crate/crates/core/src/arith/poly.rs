//! Univariate polynomials, Sturm chains, and sign-based bisection.
//!
//! All routines are generic over [`Scalar`]. Root counts and signs are
//! exact when the scalar is exact (rationals); with `f64` they are only
//! estimates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::interval::Interval;
use crate::arith::rational::log2_estimate;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c).unwrap()).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn monomial(coeff: T, degree: usize) -> Self {
        let mut c = vec![T::zero(); degree + 1];
        c[degree] = coeff;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn sign_at(&self, x: &T) -> Ordering {
        self.eval(x)
            .partial_cmp(&T::zero())
            .unwrap_or(Ordering::Equal)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).unwrap())
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&(T::one() / lead))
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    /// Sturm chain of the square-free part.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let p0 = self.square_free();
        let p1 = p0.derivative();
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_roots(&self, a: &T, b: &T) -> usize {
        assert!(!self.is_zero(), "root count of the zero polynomial");
        if a > b {
            return 0;
        }
        let chain = self.sturm_chain();
        let changes = |x: &T| {
            let mut last = Ordering::Equal;
            let mut n = 0usize;
            for p in &chain {
                let s = p.sign_at(x);
                if s == Ordering::Equal {
                    continue;
                }
                if last != Ordering::Equal && s != last {
                    n += 1;
                }
                last = s;
            }
            n
        };
        let half_open = changes(a).saturating_sub(changes(b));
        half_open + usize::from(self.sign_at(a) == Ordering::Equal)
    }
}

/// Sign-based bisection of a bracket `[lo, hi]` on which `p` changes sign.
///
/// Returns an interval of width at most `tol` whose endpoints carry opposite
/// signs of `p`, or a point interval if an exact root was hit. The sequence
/// of midpoints depends only on the bracket, so a smaller `tol` always
/// returns a sub-interval of the answer for a larger one.
pub fn bisect<T: Scalar>(p: &Poly<T>, lo: &T, hi: &T, tol: &T) -> Result<Interval<T>> {
    if tol <= &T::zero() {
        return Err(Error::Invalid("bisection tolerance must be positive".into()));
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let sa = p.sign_at(&a);
    let sb = p.sign_at(&b);
    if sa == Ordering::Equal {
        return Ok(Interval::point(a));
    }
    if sb == Ordering::Equal {
        return Ok(Interval::point(b));
    }
    if sa == sb {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{a:?}, {b:?}]"
        )));
    }
    while b.clone() - a.clone() > *tol {
        let m = T::midpoint(&a, &b);
        match p.sign_at(&m) {
            Ordering::Equal => return Ok(Interval::point(m)),
            s if s == sa => a = m,
            _ => b = m,
        }
    }
    Interval::new(a, b)
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// [`bisect`] for rationals, run on integers: the bracket is mapped to
/// `[0, 1]` and midpoints are tracked as `i / 2^k`, so no step pays for a
/// gcd. Returns exactly what [`bisect`] returns.
pub fn bisect_rational(p: &Poly<Rational>, lo: &Rational, hi: &Rational, tol: &Rational) -> Result<Interval<Rational>> {
    if tol <= &Rational::zero() {
        return Err(Error::Invalid("bisection tolerance must be positive".into()));
    }
    let sa = p.sign_at(lo);
    let sb = p.sign_at(hi);
    if sa == Ordering::Equal {
        return Ok(Interval::point(lo.clone()));
    }
    if sb == Ordering::Equal {
        return Ok(Interval::point(hi.clone()));
    }
    if sa == sb {
        return Err(Error::BracketFailure(format!("no sign change on [{lo:?}, {hi:?}]")));
    }
    let w = hi - lo;
    // p(lo + w x), scaled to integer coefficients
    let affine = Poly::new(vec![lo.clone(), w.clone()]);
    let mut q = Poly::zero();
    for c in p.coeffs().iter().rev() {
        q = q.mul(&affine).add(&Poly::new(vec![c.clone()]));
    }
    let den = q.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = q.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let d = ints.len() - 1;
    let sign_at = |m: &BigInt, k: usize| -> Ordering {
        let mut acc = ints[d].clone();
        for j in (0..d).rev() {
            acc = acc * m + (&ints[j] << (k * (d - j)));
        }
        match acc.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    };
    let point = |i: &BigInt, k: usize| lo + &w * Rational::new(i.clone(), BigInt::one() << k);
    let mut steps = (log2_estimate(&(&w / tol)) - 2).max(0) as usize;
    while &w > &(tol * Rational::from_integer(BigInt::one() << steps)) {
        steps += 1;
    }
    while steps > 0 && &w <= &(tol * Rational::from_integer(BigInt::one() << (steps - 1))) {
        steps -= 1;
    }
    let mut i = BigInt::zero();
    for k in 1..=steps {
        let m: BigInt = (&i << 1) + 1;
        match sign_at(&m, k) {
            Ordering::Equal => return Ok(Interval::point(point(&m, k))),
            s if s == sa => i = m,
            _ => i <<= 1,
        }
    }
    Interval::new(point(&i, steps), point(&(i + 1), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::Rational;

    type RP = Poly<Rational>;

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x-3)
        let p = RP::from_ints(&[-6, 11, -6, 1]);
        assert_eq!(p.count_roots(&int(0), &int(4)), 3);
        assert_eq!(p.count_roots(&int(1), &int(2)), 2);
        assert_eq!(p.count_roots(&rat(3, 2), &rat(5, 2)), 1);
        assert_eq!(p.count_roots(&int(4), &int(9)), 0);
        // double root counted once
        let q = RP::from_ints(&[1, -2, 1]);
        assert_eq!(q.count_roots(&int(0), &int(2)), 1);
        assert_eq!(RP::from_ints(&[1, 0, 1]).count_roots(&int(-10), &int(10)), 0);
    }

    #[test]
    fn square_free_part() {
        let q = RP::from_ints(&[1, -2, 1]).square_free();
        assert_eq!(q, RP::from_ints(&[-1, 1]));
    }

    #[test]
    fn bisect_sqrt2() {
        let p = RP::from_ints(&[-2, 0, 1]);
        let e = bisect(&p, &int(1), &int(2), &rat(1, 100)).unwrap();
        assert!(e.width() <= rat(1, 100));
        assert!(e.lo() * e.lo() < int(2) && e.hi() * e.hi() > int(2));
    }

    #[test]
    fn bisect_requires_sign_change() {
        let p = RP::from_ints(&[1, 0, 1]);
        assert!(matches!(
            bisect(&p, &int(0), &int(1), &rat(1, 10)),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(RP::from_ints(&[27, -36, 0, 0, 1]).to_string(), "x^4 - 36x + 27");
    }

    #[test]
    fn float_bisection_matches() {
        let p = Poly::<f64>::from_ints(&[-2, 0, 1]);
        let e = bisect(&p, &1.0, &2.0, &1e-12).unwrap();
        assert!((e.midpoint() - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn integer_bisection_agrees() {
        let cases = [
            (vec![-2, 0, 1], rat(1, 1), rat(2, 1)),
            (vec![-2, 0, 0, 1], rat(1, 1), rat(3, 2)),
            (vec![4, -6, 0, 1], rat(1, 3), rat(9, 10)),
            (vec![-1, 3], rat(-1, 7), rat(5, 7)),
            (vec![1, -3], rat(0, 1), rat(2, 3)),
        ];
        for (c, lo, hi) in cases {
            let p = RP::from_ints(&c);
            for e in [1, 2, 7, 30, 200] {
                let tol = rat(1, 3) / num_traits::pow(int(2), e);
                assert_eq!(bisect_rational(&p, &lo, &hi, &tol).unwrap(), bisect(&p, &lo, &hi, &tol).unwrap());
            }
            assert_eq!(bisect_rational(&p, &lo, &hi, &int(5)).unwrap(), bisect(&p, &lo, &hi, &int(5)).unwrap());
        }
        // exact hit at a midpoint
        let p = RP::from_ints(&[-1, 4]);
        assert_eq!(bisect_rational(&p, &int(0), &int(1), &rat(1, 1000)).unwrap(), Interval::point(rat(1, 4)));
    }
}
