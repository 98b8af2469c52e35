//! The functions `Φ` measuring the size of an integer vector.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::power::RootPower;
use crate::arith::rational::{int, parse_rat, serde_rat};
use crate::bounds::check_weights;
use crate::error::{Error, Result};
use crate::Rational;

/// `Φ(q) = ‖q‖` (sup) or `Φ_s(q) = (max_j |q_j|^{1/s_j})^{1/n}` (weighted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSpec {
    Sup,
    Weighted {
        #[serde(with = "serde_rat::vec")]
        s: Vec<Rational>,
    },
}

impl NormSpec {
    pub fn weighted(s: Vec<Rational>) -> Result<Self> {
        check_weights(&s, s.len())?;
        Ok(NormSpec::Weighted { s })
    }

    /// Parses `sup` or `weighted:s1,s2,...`.
    pub fn parse(text: &str) -> Result<Self> {
        if text == "sup" {
            return Ok(NormSpec::Sup);
        }
        let rest = text
            .strip_prefix("weighted:")
            .ok_or_else(|| Error::Parse(format!("norm must be sup or weighted:s1,s2,..., got {text:?}")))?;
        let s = rest.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
        Self::weighted(s)
    }

    /// Rejects weight vectors of the wrong length.
    pub fn check_dims(&self, n: usize) -> Result<()> {
        match self {
            NormSpec::Sup => Ok(()),
            NormSpec::Weighted { s } => check_weights(s, n),
        }
    }

    /// `Φ(m e_j) = m^{e_j}`: the exponent `e_j = 1/(n s_j)` (1 for sup).
    pub fn exponent(&self, j: usize) -> Rational {
        match self {
            NormSpec::Sup => Rational::one(),
            NormSpec::Weighted { s } => Rational::one() / (int(s.len() as i64) * &s[j]),
        }
    }

    /// `ρ = max s_j`, `δ = min s_j`; both `1/n` for sup.
    pub fn rho_delta(&self, n: usize) -> (Rational, Rational) {
        match self {
            NormSpec::Sup => (int(1) / int(n as i64), int(1) / int(n as i64)),
            NormSpec::Weighted { s } => (s.iter().max().unwrap().clone(), s.iter().min().unwrap().clone()),
        }
    }

    pub fn phi_value(&self, q: &[BigInt]) -> Result<RootPower> {
        self.check_dims(q.len())?;
        let mut best: Option<RootPower> = None;
        for (j, x) in q.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let v = RootPower::new(Rational::from_integer(x.abs()), self.exponent(j))?;
            if best.as_ref().is_none_or(|b| &v > b) {
                best = Some(v);
            }
        }
        best.ok_or(Error::ZeroVector)
    }

    pub fn phi_value_i64(&self, q: &[i64]) -> Result<RootPower> {
        self.phi_value(&q.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// `Φ(m e_j)`.
    pub fn phi_axis(&self, j: usize, m: &BigInt) -> Result<RootPower> {
        RootPower::new(Rational::from_integer(m.abs()), self.exponent(j))
    }

    /// Largest `B_j` with `Φ(B_j e_j) <= t`, for each coordinate; the set
    /// `{q : Φ(q) <= t}` is exactly the box `|q_j| <= B_j`.
    pub fn coord_bounds(&self, n: usize, t: &RootPower) -> Vec<BigInt> {
        (0..n)
            .map(|j| t.pow(&(Rational::one() / self.exponent(j))).floor())
            .collect()
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Sup => write!(f, "sup"),
            NormSpec::Weighted { s } => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "weighted:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn v(q: &[i64]) -> Vec<BigInt> {
        q.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sup_and_weighted_values() {
        assert_eq!(NormSpec::Sup.phi_value(&v(&[3, -4])).unwrap().to_rational(), Some(int(4)));
        let half = NormSpec::weighted(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(half.phi_value(&v(&[3, -4])).unwrap().to_rational(), Some(int(4)));
        // ‖(2,2)‖_s = max(2^3, 2^{3/2}) = 8 and Φ_s = 8^{1/n} with n = 2
        let w = NormSpec::weighted(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let phi = w.phi_value(&v(&[2, 2])).unwrap();
        assert_eq!(phi, RootPower::new(int(8), rat(1, 2)).unwrap());
        assert!(matches!(NormSpec::Sup.phi_value(&v(&[0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn uniform_weights_agree_with_sup() {
        for n in 2..=4usize {
            let w = NormSpec::weighted(vec![rat(1, n as i64); n]).unwrap();
            for seed in 1..60i64 {
                let q: Vec<i64> = (0..n as i64).map(|j| (seed * (j + 3) * 7919) % 23 - 11).collect();
                if q.iter().all(|&x| x == 0) {
                    continue;
                }
                assert_eq!(w.phi_value_i64(&q).unwrap(), NormSpec::Sup.phi_value_i64(&q).unwrap());
            }
        }
    }

    #[test]
    fn bounds_describe_the_sublevel_set() {
        let w = NormSpec::weighted(vec![rat(2, 3), rat(1, 3)]).unwrap();
        for t in [rat(3, 2), int(2), int(5), rat(37, 3)] {
            let tp = RootPower::rational(t.clone()).unwrap();
            let b = w.coord_bounds(2, &tp);
            for x in -40i64..=40 {
                for y in -40i64..=40 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let inside = w.phi_value_i64(&[x, y]).unwrap() <= tp;
                    let boxed = BigInt::from(x.abs()) <= b[0] && BigInt::from(y.abs()) <= b[1];
                    assert_eq!(inside, boxed, "t={t} q=({x},{y})");
                }
            }
        }
    }

    #[test]
    fn parse_and_json() {
        assert_eq!(NormSpec::parse("sup").unwrap(), NormSpec::Sup);
        let w = NormSpec::parse("weighted:2/3,1/3").unwrap();
        assert_eq!(w.rho_delta(2), (rat(2, 3), rat(1, 3)));
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(j, r#"{"kind":"weighted","s":["2/3","1/3"]}"#);
        assert_eq!(serde_json::from_str::<NormSpec>(&j).unwrap(), w);
        assert!(NormSpec::parse("weighted:1/2,1/3").is_err());
    }
}
