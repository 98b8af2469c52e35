//! Digit-restricted perfect subsets of the line and their cylinders.
//!
//! A [`DigitSystem`] describes `S = {offset + scale · Σ d_i b^{-i} : d_i ∈ D}`.
//! The middle-thirds Cantor set is `b = 3`, `D = {0, 2}`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{fmt_rat, int, parse_rat, serde_rat};
use crate::error::{Error, Result};
use crate::{RatInterval, Rational};

const DIGIT_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDigitSystem", into = "RawDigitSystem")]
pub struct DigitSystem {
    base: u32,
    digits: Vec<u32>,
    offset: Rational,
    scale: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawDigitSystem {
    base: u32,
    digits: Vec<u32>,
    #[serde(with = "serde_rat", default = "Rational::zero")]
    offset: Rational,
    #[serde(with = "serde_rat", default = "Rational::one")]
    scale: Rational,
}

impl TryFrom<RawDigitSystem> for DigitSystem {
    type Error = Error;

    fn try_from(r: RawDigitSystem) -> Result<Self> {
        DigitSystem::new(r.base, r.digits, r.offset, r.scale)
    }
}

impl From<DigitSystem> for RawDigitSystem {
    fn from(d: DigitSystem) -> Self {
        RawDigitSystem {
            base: d.base,
            digits: d.digits,
            offset: d.offset,
            scale: d.scale,
        }
    }
}

impl DigitSystem {
    pub fn new(base: u32, mut digits: Vec<u32>, offset: Rational, scale: Rational) -> Result<Self> {
        if !(2..=36).contains(&base) {
            return Err(Error::Invalid(format!("base must be in 2..=36, got {base}")));
        }
        digits.sort_unstable();
        digits.dedup();
        if digits.len() < 2 {
            return Err(Error::Invalid("a digit system needs at least two digits".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::Invalid(format!("digit {d} out of range for base {base}")));
        }
        if !scale.is_positive() {
            return Err(Error::Invalid("scale must be positive".into()));
        }
        Ok(DigitSystem {
            base,
            digits,
            offset,
            scale,
        })
    }

    pub fn simple(base: u32, digits: Vec<u32>) -> Result<Self> {
        Self::new(base, digits, Rational::zero(), Rational::one())
    }

    pub fn middle_thirds() -> Self {
        Self::simple(3, vec![0, 2]).unwrap()
    }

    /// Parses `"b:d1,d2,..."` with optional `":offset:scale"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("digit system must look like 3:0,2, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 2 && parts.len() != 4 {
            return Err(bad());
        }
        let base = parts[0].trim().parse().map_err(|_| bad())?;
        let digits = parts[1]
            .split(',')
            .map(|d| d.trim().parse().map_err(|_| bad()))
            .collect::<Result<Vec<u32>>>()?;
        let (offset, scale) = if parts.len() == 4 {
            (parse_rat(parts[2])?, parse_rat(parts[3])?)
        } else {
            (Rational::zero(), Rational::one())
        };
        Self::new(base, digits, offset, scale)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn min_digit(&self) -> u32 {
        self.digits[0]
    }

    pub fn max_digit(&self) -> u32 {
        *self.digits.last().unwrap()
    }

    pub fn allows(&self, d: u32) -> bool {
        self.digits.binary_search(&d).is_ok()
    }

    fn b(&self) -> Rational {
        int(self.base as i64)
    }

    /// `b^{-depth}`.
    pub fn unit(&self, depth: usize) -> Rational {
        Rational::new(BigInt::one(), num_traits::pow(BigInt::from(self.base), depth))
    }

    /// Hull of the whole set.
    pub fn hull(&self) -> RatInterval {
        Cylinder::root(self.clone()).hull()
    }

    /// `offset + scale · Σ P_i b^{-i}`.
    pub fn prefix_value(&self, prefix: &[u32]) -> Rational {
        let mut acc = BigInt::zero();
        for &d in prefix {
            acc = acc * self.base + d;
        }
        let frac = Rational::new(acc, num_traits::pow(BigInt::from(self.base), prefix.len()));
        &self.offset + &self.scale * frac
    }

    /// Exact membership test for a rational.
    ///
    /// Walks the finite graph of states `b·y − d`; `y` lies in the set iff
    /// some infinite path exists. Gives up after `limit` distinct states.
    pub fn contains_limited(&self, x: &Rational, limit: usize) -> Result<bool> {
        let y = (x - &self.offset) / &self.scale;
        let b1 = self.b() - Rational::one();
        let lo = int(self.min_digit() as i64) / &b1;
        let hi = int(self.max_digit() as i64) / &b1;
        if y < lo || y > hi {
            return Ok(false);
        }
        let mut index: HashMap<Rational, usize> = HashMap::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(y.clone(), 0);
        succ.push(Vec::new());
        queue.push_back(y);
        while let Some(s) = queue.pop_front() {
            let i = index[&s];
            for &d in &self.digits {
                let t = self.b() * &s - int(d as i64);
                if t < lo || t > hi {
                    continue;
                }
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if index.len() >= limit {
                            return Err(Error::Invalid(format!(
                                "membership of {} undecided after {limit} states",
                                fmt_rat(x)
                            )));
                        }
                        let j = succ.len();
                        index.insert(t.clone(), j);
                        succ.push(Vec::new());
                        queue.push_back(t);
                        j
                    }
                };
                succ[i].push(j);
            }
        }
        // prune states with no surviving successor
        let mut alive = vec![true; succ.len()];
        loop {
            let mut changed = false;
            for i in 0..succ.len() {
                if alive[i] && !succ[i].iter().any(|&j| alive[j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(alive[0])
    }

    pub fn contains(&self, x: &Rational) -> Result<bool> {
        self.contains_limited(x, 1 << 20)
    }

    pub fn parse_prefix(&self, s: &str) -> Result<Vec<u32>> {
        s.chars()
            .map(|c| {
                let d = c
                    .to_digit(36)
                    .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in prefix {s:?}")))?;
                if !self.allows(d) {
                    return Err(Error::Parse(format!("digit {d} not allowed in prefix {s:?}")));
                }
                Ok(d)
            })
            .collect()
    }
}

impl fmt::Display for DigitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}:{}", self.base, ds.join(","))?;
        if !self.offset.is_zero() || !self.scale.is_one() {
            write!(f, ":{}:{}", fmt_rat(&self.offset), fmt_rat(&self.scale))?;
        }
        Ok(())
    }
}

pub fn format_prefix(prefix: &[u32]) -> String {
    prefix.iter().map(|&d| DIGIT_CHARS[d as usize] as char).collect()
}

/// Points of a [`DigitSystem`] sharing a finite digit prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cylinder {
    system: DigitSystem,
    prefix: Vec<u32>,
}

impl Cylinder {
    pub fn root(system: DigitSystem) -> Self {
        Cylinder {
            system,
            prefix: Vec::new(),
        }
    }

    pub fn new(system: DigitSystem, prefix: Vec<u32>) -> Result<Self> {
        if let Some(d) = prefix.iter().find(|&&d| !system.allows(d)) {
            return Err(Error::Invalid(format!("digit {d} not in the digit set")));
        }
        Ok(Cylinder { system, prefix })
    }

    pub fn parse(system: DigitSystem, prefix: &str) -> Result<Self> {
        let p = system.parse_prefix(prefix)?;
        Ok(Cylinder { system, prefix: p })
    }

    pub fn system(&self) -> &DigitSystem {
        &self.system
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn prefix_string(&self) -> String {
        format_prefix(&self.prefix)
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_prefix_of(&self, other: &Cylinder) -> bool {
        other.prefix.starts_with(&self.prefix)
    }

    pub fn child(&self, d: u32) -> Result<Self> {
        let mut p = self.prefix.clone();
        p.push(d);
        Self::new(self.system.clone(), p)
    }

    pub fn extend(&self, tail: &[u32]) -> Result<Self> {
        let mut p = self.prefix.clone();
        p.extend_from_slice(tail);
        Self::new(self.system.clone(), p)
    }

    /// Sub-cylinders one level down, in increasing digit order.
    pub fn children(&self) -> Vec<Cylinder> {
        self.system
            .digits
            .iter()
            .map(|&d| self.child(d).unwrap())
            .collect()
    }

    /// Closed hull of the points of the set in this cylinder.
    pub fn hull(&self) -> RatInterval {
        let s = &self.system;
        let v = s.prefix_value(&self.prefix);
        let tail = &s.scale * s.unit(self.prefix.len()) / (s.b() - Rational::one());
        let lo = &v + &tail * int(s.min_digit() as i64);
        let hi = v + tail * int(s.max_digit() as i64);
        RatInterval::new(lo, hi).unwrap()
    }

    /// The point with all-minimal-digit tail; always in the set.
    pub fn anchor(&self) -> Rational {
        self.hull().lo().clone()
    }

    /// Anchors of sub-cylinders at depth `>= min_depth`, each value once,
    /// depth by depth in lexicographic order.
    pub fn rationals_in(&self, min_depth: usize) -> Result<RationalsIn> {
        if min_depth < self.depth() {
            return Err(Error::Invalid(format!(
                "min_depth {min_depth} is below the cylinder depth {}",
                self.depth()
            )));
        }
        Ok(RationalsIn {
            root: self.clone(),
            depth: min_depth,
            odometer: vec![0; min_depth - self.depth()],
            done_level: false,
            seen: HashSet::new(),
        })
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.system, self.prefix_string())
    }
}

/// Lazy stream returned by [`Cylinder::rationals_in`].
pub struct RationalsIn {
    root: Cylinder,
    depth: usize,
    odometer: Vec<usize>,
    done_level: bool,
    seen: HashSet<Rational>,
}

impl RationalsIn {
    fn advance(&mut self) {
        let k = self.root.system.digits.len();
        for slot in self.odometer.iter_mut().rev() {
            *slot += 1;
            if *slot < k {
                return;
            }
            *slot = 0;
        }
        self.done_level = true;
    }
}

impl Iterator for RationalsIn {
    type Item = (Rational, Cylinder);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.done_level {
                self.depth += 1;
                self.odometer = vec![0; self.depth - self.root.depth()];
                self.done_level = false;
            }
            let tail: Vec<u32> = self
                .odometer
                .iter()
                .map(|&i| self.root.system.digits[i])
                .collect();
            self.advance();
            let c = self.root.extend(&tail).unwrap();
            let a = c.anchor();
            if self.seen.insert(a.clone()) {
                return Some((a, c));
            }
        }
    }
}

/// Product `S_1 × ⋯ × S_n` of digit systems, `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DigitSystem>", into = "Vec<DigitSystem>")]
pub struct ProductSet {
    factors: Vec<DigitSystem>,
}

impl TryFrom<Vec<DigitSystem>> for ProductSet {
    type Error = Error;

    fn try_from(factors: Vec<DigitSystem>) -> Result<Self> {
        ProductSet::new(factors)
    }
}

impl From<ProductSet> for Vec<DigitSystem> {
    fn from(p: ProductSet) -> Self {
        p.factors
    }
}

impl ProductSet {
    pub fn new(factors: Vec<DigitSystem>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::BadDims(format!(
                "a product set needs n >= 2 factors, got {}",
                factors.len()
            )));
        }
        Ok(ProductSet { factors })
    }

    pub fn dims(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[DigitSystem] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &DigitSystem {
        &self.factors[k]
    }
}
