//! Descriptors of real numbers that can be enclosed to any width.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::poly::{bisect_rational, Poly};
use crate::arith::rational::{fmt_magnitude, fmt_rat, int, parse_rat, pow2, serde_bigint, serde_rat};
use crate::digits::{format_prefix, Cylinder, DigitSystem};
use crate::error::{Error, Result};
use crate::{RatInterval, Rational};

/// How the infinite digit string of a cylinder point is generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrefixPolicy {
    /// `prefix` followed by `period` repeated forever.
    Periodic { prefix: String, period: String },
    /// The Fibonacci word over the smallest and largest digits.
    Fibonacci,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RealDescriptor {
    Exact {
        #[serde(with = "serde_rat")]
        value: Rational,
    },
    /// The unique root of `poly` (ascending integer coefficients) in `bracket`.
    Algebraic {
        #[serde(with = "serde_bigint::vec")]
        poly: Vec<BigInt>,
        bracket: RatInterval,
    },
    Cylinder {
        system: DigitSystem,
        policy: PrefixPolicy,
    },
    /// `constant + Σ a_k · b_k`.
    Affine {
        constant: Box<RealDescriptor>,
        terms: Vec<(RealDescriptor, RealDescriptor)>,
    },
}

fn fibonacci_word(len: usize) -> Vec<bool> {
    let (mut a, mut b) = (vec![false], vec![false, true]);
    while b.len() < len {
        let next = [b.clone(), a].concat();
        a = b;
        b = next;
    }
    b.truncate(len);
    b
}

impl PrefixPolicy {
    fn digits(&self, system: &DigitSystem, len: usize) -> Result<Vec<u32>> {
        match self {
            PrefixPolicy::Periodic { prefix, period } => {
                let p = system.parse_prefix(prefix)?;
                let r = system.parse_prefix(period)?;
                if r.is_empty() {
                    return Err(Error::Invalid("periodic policy needs a nonempty period".into()));
                }
                Ok((0..len)
                    .map(|i| if i < p.len() { p[i] } else { r[(i - p.len()) % r.len()] })
                    .collect())
            }
            PrefixPolicy::Fibonacci => Ok(fibonacci_word(len)
                .into_iter()
                .map(|b| if b { system.max_digit() } else { system.min_digit() })
                .collect()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "fib" {
            return Ok(PrefixPolicy::Fibonacci);
        }
        let bad = || Error::Parse(format!("prefix policy must be fib or prefix(period), got {s:?}"));
        let (prefix, rest) = s.split_once('(').ok_or_else(bad)?;
        let period = rest.strip_suffix(')').ok_or_else(bad)?;
        Ok(PrefixPolicy::Periodic {
            prefix: prefix.to_string(),
            period: period.to_string(),
        })
    }
}

impl fmt::Display for PrefixPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixPolicy::Periodic { prefix, period } => write!(f, "{prefix}({period})"),
            PrefixPolicy::Fibonacci => write!(f, "fib"),
        }
    }
}

impl RealDescriptor {
    pub fn exact(value: Rational) -> Self {
        RealDescriptor::Exact { value }
    }

    pub fn algebraic(poly: &[i64], lo: Rational, hi: Rational) -> Result<Self> {
        let d = RealDescriptor::Algebraic {
            poly: poly.iter().map(|&c| BigInt::from(c)).collect(),
            bracket: RatInterval::new(lo, hi)?,
        };
        d.validate()?;
        Ok(d)
    }

    /// `2^{1/3}`.
    pub fn cbrt2() -> Self {
        Self::algebraic(&[-2, 0, 0, 1], int(1), int(2)).unwrap()
    }

    /// `2^{2/3}`.
    pub fn cbrt4() -> Self {
        Self::algebraic(&[-4, 0, 0, 1], int(1), int(2)).unwrap()
    }

    pub fn cylinder(system: DigitSystem, policy: PrefixPolicy) -> Result<Self> {
        let d = RealDescriptor::Cylinder { system, policy };
        d.validate()?;
        Ok(d)
    }

    pub fn affine(constant: RealDescriptor, terms: Vec<(RealDescriptor, RealDescriptor)>) -> Self {
        RealDescriptor::Affine {
            constant: Box::new(constant),
            terms,
        }
    }

    pub fn product(a: RealDescriptor, b: RealDescriptor) -> Self {
        Self::affine(Self::exact(Rational::zero()), vec![(a, b)])
    }

    pub fn shifted(&self, k: &Rational) -> Self {
        match self {
            RealDescriptor::Exact { value } => Self::exact(value + k),
            _ => Self::affine(
                Self::exact(k.clone()),
                vec![(Self::exact(Rational::one()), self.clone())],
            ),
        }
    }

    fn poly(coeffs: &[BigInt]) -> Poly<Rational> {
        Poly::new(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// Checks the structural invariants; for algebraic descriptors, that the
    /// bracket isolates exactly one root.
    pub fn validate(&self) -> Result<()> {
        match self {
            RealDescriptor::Exact { .. } => Ok(()),
            RealDescriptor::Algebraic { poly, bracket } => {
                let p = Self::poly(poly);
                if p.is_zero() {
                    return Err(Error::NonIsolating { roots: usize::MAX });
                }
                let roots = p.count_roots(bracket.lo(), bracket.hi());
                if roots != 1 {
                    return Err(Error::NonIsolating { roots });
                }
                Ok(())
            }
            RealDescriptor::Cylinder { system, policy } => policy.digits(system, 1).map(|_| ()),
            RealDescriptor::Affine { constant, terms } => {
                constant.validate()?;
                for (a, b) in terms {
                    a.validate()?;
                    b.validate()?;
                }
                Ok(())
            }
        }
    }

    /// The value when it is known to be rational.
    pub fn exact_value(&self) -> Option<Rational> {
        match self {
            RealDescriptor::Exact { value } => Some(value.clone()),
            RealDescriptor::Algebraic { poly, bracket } => {
                let p = Self::poly(poly).square_free();
                if p.degree() == 1 {
                    let c = p.coeffs();
                    return Some(-&c[0] / &c[1]);
                }
                bracket.is_point().then(|| bracket.lo().clone())
            }
            RealDescriptor::Cylinder { system, policy } => match policy {
                PrefixPolicy::Fibonacci => None,
                PrefixPolicy::Periodic { prefix, period } => {
                    let p = system.parse_prefix(prefix).ok()?;
                    let r = system.parse_prefix(period).ok()?;
                    let b = BigInt::from(system.base());
                    let mut rv = BigInt::zero();
                    for &d in &r {
                        rv = rv * &b + d;
                    }
                    let tail = Rational::new(rv, num_traits::pow(b, r.len()) - 1u32);
                    let y = system.prefix_value(&p) + system.scale() * system.unit(p.len()) * tail;
                    Some(y)
                }
            },
            RealDescriptor::Affine { constant, terms } => {
                let mut acc = constant.exact_value()?;
                for (a, b) in terms {
                    acc += a.exact_value()? * b.exact_value()?;
                }
                Some(acc)
            }
        }
    }

    /// Enclosure from the deterministic refinement ladder at level `k`
    /// (input widths `<= 2^{-k}`). Higher levels give sub-intervals.
    fn enclose_level(&self, k: u32) -> Result<RatInterval> {
        self.enclose(&pow2(-(k as i64)))
    }

    /// An interval of width `<= width` containing the value. A smaller
    /// `width` always yields a sub-interval of the answer for a larger one.
    pub fn enclose(&self, width: &Rational) -> Result<RatInterval> {
        if width <= &Rational::zero() {
            return Err(Error::Invalid("enclosure width must be positive".into()));
        }
        match self {
            RealDescriptor::Exact { value } => Ok(RatInterval::point(value.clone())),
            RealDescriptor::Algebraic { poly, bracket } => {
                self.validate()?;
                let p = Self::poly(poly).square_free();
                bisect_rational(&p, bracket.lo(), bracket.hi(), width)
            }
            RealDescriptor::Cylinder { system, policy } => {
                let w0 = system.hull().width();
                let mut depth = 0;
                while &(&w0 * system.unit(depth)) > width {
                    depth += 1;
                }
                let digits = policy.digits(system, depth)?;
                Ok(Cylinder::new(system.clone(), digits)?.hull())
            }
            RealDescriptor::Affine { constant, terms } => {
                if let Some(v) = self.exact_value() {
                    return Ok(RatInterval::point(v));
                }
                let mut k = 8;
                loop {
                    let mut acc = constant.enclose_level(k)?;
                    for (a, b) in terms {
                        acc = acc.add(&a.enclose_level(k)?.mul(&b.enclose_level(k)?));
                    }
                    if &acc.width() <= width {
                        return Ok(acc);
                    }
                    if k > 1 << 16 {
                        return Err(Error::PrecisionExhausted {
                            width: fmt_magnitude(&acc.width()),
                            tol: fmt_magnitude(width),
                            hint: "affine composition does not converge".into(),
                        });
                    }
                    k *= 2;
                }
            }
        }
    }

    /// Parses `p/q`, a decimal, `alg:c0,c1,...:lo,hi`, `cyl:<system>:<policy>`,
    /// or one of the names `cbrt2`, `cbrt4`, `sqrt2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "cbrt2" => return Ok(Self::cbrt2()),
            "cbrt4" => return Ok(Self::cbrt4()),
            "sqrt2" => return Self::algebraic(&[-2, 0, 1], int(1), int(2)),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("alg:") {
            let bad = || Error::Parse(format!("algebraic descriptor must look like alg:-2,0,1:1,2, got {s:?}"));
            let (coeffs, bracket) = rest.split_once(':').ok_or_else(bad)?;
            let poly = coeffs
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            let (lo, hi) = bracket.split_once(',').ok_or_else(bad)?;
            let d = RealDescriptor::Algebraic {
                poly,
                bracket: RatInterval::new(parse_rat(lo)?, parse_rat(hi)?)?,
            };
            d.validate()?;
            return Ok(d);
        }
        if let Some(rest) = s.strip_prefix("cyl:") {
            let (system, policy) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("cylinder descriptor must look like cyl:3:0,2:fib, got {s:?}")))?;
            return Self::cylinder(DigitSystem::parse(system)?, PrefixPolicy::parse(policy)?);
        }
        Ok(Self::exact(parse_rat(s)?))
    }
}

impl fmt::Display for RealDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealDescriptor::Exact { value } => write!(f, "{}", fmt_rat(value)),
            RealDescriptor::Algebraic { poly, bracket } => {
                let c: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
                write!(f, "alg:{}:{},{}", c.join(","), fmt_rat(bracket.lo()), fmt_rat(bracket.hi()))
            }
            RealDescriptor::Cylinder { system, policy } => write!(f, "cyl:{system}:{policy}"),
            RealDescriptor::Affine { constant, terms } => {
                write!(f, "({constant}")?;
                for (a, b) in terms {
                    write!(f, " + {a}*{b}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Prefix string helper re-exported for policies built from digit vectors.
pub fn periodic(prefix: &[u32], period: &[u32]) -> PrefixPolicy {
    PrefixPolicy::Periodic {
        prefix: format_prefix(prefix),
        period: format_prefix(period),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn exact_is_a_point() {
        let e = RealDescriptor::exact(rat(1, 3)).enclose(&rat(1, 100)).unwrap();
        assert_eq!(e, RatInterval::point(rat(1, 3)));
    }

    #[test]
    fn sqrt2_enclosure() {
        let d = RealDescriptor::algebraic(&[-2, 0, 1], int(1), int(2)).unwrap();
        let e = d.enclose(&rat(1, 100)).unwrap();
        assert!(e.width() <= rat(1, 100));
        // oracle: endpoint squares straddle 2
        assert!(e.lo() * e.lo() <= int(2) && e.hi() * e.hi() >= int(2));
        assert!(e.contains(&rat(141421, 100000)));
    }

    #[test]
    fn cbrt2_enclosure() {
        let e = RealDescriptor::cbrt2().enclose(&rat(1, 1000)).unwrap();
        let cube = |x: &Rational| x * x * x;
        assert!(cube(e.lo()) <= int(2) && cube(e.hi()) >= int(2));
        assert!(e.contains(&rat(12599, 10000)));
    }

    #[test]
    fn non_isolating_brackets() {
        // x^2 - 2 on [-2, 2] has two roots, on [2, 3] none
        assert!(matches!(
            RealDescriptor::algebraic(&[-2, 0, 1], int(-2), int(2)),
            Err(Error::NonIsolating { roots: 2 })
        ));
        assert!(matches!(
            RealDescriptor::algebraic(&[-2, 0, 1], int(2), int(3)),
            Err(Error::NonIsolating { roots: 0 })
        ));
        let raw = RealDescriptor::Algebraic {
            poly: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            bracket: RatInterval::new(int(-2), int(2)).unwrap(),
        };
        assert!(matches!(raw.enclose(&rat(1, 10)), Err(Error::NonIsolating { .. })));
    }

    #[test]
    fn cylinder_points() {
        let d = RealDescriptor::parse("cyl:3:0,2:0(2)").unwrap();
        assert_eq!(d.exact_value(), Some(rat(1, 3)));
        assert!(d.enclose(&rat(1, 1000)).unwrap().contains(&rat(1, 3)));
        let f = RealDescriptor::parse("cyl:3:0,2:fib").unwrap();
        let e = f.enclose(&rat(1, 1_000_000)).unwrap();
        assert!(e.width() <= rat(1, 1_000_000));
        assert!(f.exact_value().is_none());
    }

    #[test]
    fn affine_products() {
        let t = RealDescriptor::cbrt2();
        let sq = RealDescriptor::product(t.clone(), t);
        let e = sq.enclose(&rat(1, 1_000_000)).unwrap();
        // oracle: θ² is the real cube root of 4
        let cube = |x: &Rational| x * x * x;
        assert!(cube(e.lo()) <= int(4) && cube(e.hi()) >= int(4));
        assert!(e.width() <= rat(1, 1_000_000));
    }

    #[test]
    fn parse_and_json_roundtrip() {
        for s in ["1/3", "alg:-2,0,0,1:1/1,2/1", "cyl:3:0,2:fib", "cyl:4:1,3:1(3)"] {
            let d = RealDescriptor::parse(s).unwrap();
            let j = serde_json::to_string(&d).unwrap();
            let back: RealDescriptor = serde_json::from_str(&j).unwrap();
            assert_eq!(back, d);
            assert_eq!(RealDescriptor::parse(&d.to_string()).unwrap(), d);
        }
        let j = serde_json::to_string(&RealDescriptor::exact(rat(1, 2))).unwrap();
        assert_eq!(j, r#"{"kind":"exact","value":"1/2"}"#);
        assert!(RealDescriptor::parse("alg:1,0,1:0,1").is_err());
    }

    proptest::proptest! {
        #[test]
        fn enclosures_are_monotone(a in 1u32..40, b in 1u32..40, which in 0usize..4) {
            let d = match which {
                0 => RealDescriptor::cbrt2(),
                1 => RealDescriptor::parse("cyl:3:0,2:fib").unwrap(),
                2 => RealDescriptor::product(RealDescriptor::cbrt2(), RealDescriptor::cbrt4()),
                _ => RealDescriptor::algebraic(&[-3, 0, 1], int(1), int(2)).unwrap(),
            };
            let (wide, narrow) = (a.min(b), a.max(b));
            let ew = d.enclose(&pow2(-(wide as i64))).unwrap();
            let en = d.enclose(&pow2(-(narrow as i64))).unwrap();
            proptest::prop_assert!(en.is_subset_of(&ew));
        }
    }
}
