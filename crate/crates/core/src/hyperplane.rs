//! Rational affine hyperplanes `A_m = {ξ : Σ m_i ξ_i = m_0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::serde_bigint;
use crate::arith::region::RatBox;
use crate::error::{Error, Result};
use crate::{RatInterval, Rational};

/// A primitive integer vector `(m0; m1, …, mn)` with `(m1, …, mn) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHyperplane", into = "RawHyperplane")]
pub struct Hyperplane {
    m0: BigInt,
    m: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawHyperplane {
    #[serde(with = "serde_bigint")]
    m0: BigInt,
    #[serde(with = "serde_bigint::vec")]
    m: Vec<BigInt>,
}

impl TryFrom<RawHyperplane> for Hyperplane {
    type Error = Error;

    fn try_from(r: RawHyperplane) -> Result<Self> {
        Hyperplane::new(r.m0, r.m)
    }
}

impl From<Hyperplane> for RawHyperplane {
    fn from(h: Hyperplane) -> Self {
        RawHyperplane { m0: h.m0, m: h.m }
    }
}

fn content(m0: &BigInt, m: &[BigInt]) -> BigInt {
    m.iter().fold(m0.abs(), |g, x| g.gcd(x))
}

impl Hyperplane {
    /// Accepts only primitive coefficient vectors.
    pub fn new(m0: BigInt, m: Vec<BigInt>) -> Result<Self> {
        if m.iter().all(Zero::is_zero) {
            return Err(Error::ZeroForm);
        }
        let g = content(&m0, &m);
        if !g.is_one() {
            return Err(Error::NotPrimitive { gcd: g.to_string() });
        }
        Ok(Hyperplane { m0, m })
    }

    pub fn from_ints(m0: i64, m: &[i64]) -> Result<Self> {
        Self::new(BigInt::from(m0), m.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Divides out the gcd and makes the first nonzero `m_j` positive.
    pub fn make_primitive(m0: BigInt, m: Vec<BigInt>) -> Result<Self> {
        let first = m.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroForm)?;
        let mut g = content(&m0, &m);
        if first.is_negative() {
            g = -g;
        }
        Ok(Hyperplane {
            m0: m0 / &g,
            m: m.into_iter().map(|x| x / &g).collect(),
        })
    }

    /// `ξ_k = r` in `n` dimensions, `k` 1-based.
    pub fn coordinate(k: usize, r: &Rational, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::BadDims(format!("coordinate {k} out of range 1..={n}")));
        }
        let mut m = vec![BigInt::zero(); n];
        m[k - 1] = r.denom().clone();
        Self::new(r.numer().clone(), m)
    }

    pub fn m0(&self) -> &BigInt {
        &self.m0
    }

    pub fn m(&self) -> &[BigInt] {
        &self.m
    }

    pub fn dims(&self) -> usize {
        self.m.len()
    }

    /// `max_j |m_j|`; the offset `m0` does not count.
    pub fn height(&self) -> BigInt {
        self.m.iter().map(|x| x.abs()).max().unwrap()
    }

    /// `Σ m_j x_j − m0`.
    pub fn form_value(&self, x: &[Rational]) -> Rational {
        let s: Rational = self
            .m
            .iter()
            .zip(x)
            .map(|(m, v)| Rational::from_integer(m.clone()) * v)
            .sum();
        s - Rational::from_integer(self.m0.clone())
    }

    /// `Some((k, p/q))` (1-based `k`) when the hyperplane is `ξ_k = p/q`.
    pub fn as_coordinate(&self) -> Option<(usize, Rational)> {
        let nz: Vec<usize> = (0..self.m.len()).filter(|&j| !self.m[j].is_zero()).collect();
        match nz.as_slice() {
            [j] => Some((j + 1, Rational::new(self.m0.clone(), self.m[*j].clone()))),
            _ => None,
        }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.m0, m.join(","))
    }
}

/// Range of `Σ m_j ξ_j − m0` over the box, exact at the per-coordinate extremes.
pub fn interval_linform(h: &Hyperplane, b: &RatBox) -> Result<RatInterval> {
    if h.dims() != b.dims() {
        return Err(Error::BadDims(format!(
            "hyperplane in {} dimensions, box in {}",
            h.dims(),
            b.dims()
        )));
    }
    let m0 = Rational::from_integer(h.m0.clone());
    let mut lo = -m0.clone();
    let mut hi = -m0;
    for (m, iv) in h.m.iter().zip(b.intervals()) {
        let m = Rational::from_integer(m.clone());
        let (a, c) = (&m * iv.lo(), &m * iv.hi());
        if m.is_negative() {
            lo += c;
            hi += a;
        } else {
            lo += a;
            hi += c;
        }
    }
    RatInterval::new(lo, hi)
}

/// Sign-normalized nonzero vectors in `[-h, h]^n`, lexicographic.
fn normalized_vectors(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * h + 1) as u64;
    (0..side.pow(n as u32)).filter_map(move |mut code| {
        let mut v = vec![0i64; n];
        for j in (0..n).rev() {
            v[j] = (code % side) as i64 - h;
            code /= side;
        }
        let first = v.iter().find(|&&x| x != 0)?;
        (*first > 0).then_some(v)
    })
}

/// Every primitive sign-normalized hyperplane with height `<= h` and
/// `|m0| <= b`, ordered lexicographically by `(m0, m1, …, mn)`.
pub fn enumerate_hyperplanes(n: usize, h: u32, b: u32) -> impl Iterator<Item = Hyperplane> {
    let (h, b) = (h as i64, b as i64);
    (-b..=b).flat_map(move |m0| {
        normalized_vectors(n, h).filter_map(move |m| {
            let g = m.iter().fold(m0.abs(), |g, x| g.gcd(x));
            (g == 1).then(|| Hyperplane::from_ints(m0, &m).unwrap())
        })
    })
}

/// All primitive hyperplanes of height `<= h` meeting the closed box.
pub fn hyperplanes_meeting(b: &RatBox, h: u32) -> Vec<Hyperplane> {
    let f = b.integer_form();
    let mut out = Vec::new();
    for m in normalized_vectors(b.dims(), h as i64) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (j, &mj) in m.iter().enumerate() {
            let mj = BigInt::from(mj);
            let (a, c) = (&mj * &f.lo[j], &mj * &f.hi[j]);
            if mj.is_negative() {
                lo += c;
                hi += a;
            } else {
                lo += a;
                hi += c;
            }
        }
        let first = Integer::div_ceil(&lo, &f.den);
        let last = hi.div_floor(&f.den);
        let mut m0 = first;
        while m0 <= last {
            let g = m.iter().fold(m0.abs(), |g, &x| g.gcd(&BigInt::from(x)));
            if g.is_one() {
                out.push(Hyperplane {
                    m0: m0.clone(),
                    m: m.iter().map(|&x| BigInt::from(x)).collect(),
                });
            }
            m0 += 1;
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::arith::rational::{int, rat};

    fn hp(m0: i64, m: &[i64]) -> Hyperplane {
        Hyperplane::from_ints(m0, m).unwrap()
    }

    fn bx(iv: &[(Rational, Rational)]) -> RatBox {
        RatBox::new(iv.iter().map(|(a, b)| RatInterval::new(a.clone(), b.clone()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn heights() {
        assert_eq!(hp(1, &[2, -3]).height(), BigInt::from(3));
        assert_eq!(hp(7, &[0, 1]).height(), BigInt::from(1));
        assert!(matches!(Hyperplane::from_ints(4, &[0, 0, 2]), Err(Error::NotPrimitive { .. })));
        assert!(Hyperplane::from_ints(5, &[0, 0, 4]).is_ok());
    }

    #[test]
    fn primitivization() {
        let p = |m0: i64, m: &[i64]| {
            Hyperplane::make_primitive(BigInt::from(m0), m.iter().map(|&x| BigInt::from(x)).collect())
        };
        assert_eq!(p(2, &[4, 6]).unwrap(), hp(1, &[2, 3]));
        assert_eq!(p(0, &[0, -5]).unwrap(), hp(0, &[0, 1]));
        assert!(matches!(p(3, &[0, 0]), Err(Error::ZeroForm)));
    }

    #[test]
    fn coordinate_hyperplanes() {
        let h = Hyperplane::coordinate(1, &rat(2, 9), 2).unwrap();
        assert_eq!(h, hp(2, &[9, 0]));
        assert_eq!(h.height(), BigInt::from(9));
        assert_eq!(Hyperplane::coordinate(2, &int(0), 3).unwrap(), hp(0, &[0, 1, 0]));
        let h = Hyperplane::coordinate(2, &rat(5, 3), 2).unwrap();
        assert_eq!(h, hp(5, &[0, 3]));
        assert_eq!(h.as_coordinate(), Some((2, rat(5, 3))));
    }

    /// Naive double loop over all integer vectors, normalized by hand.
    fn oracle(n: usize, h: i64, b: i64) -> HashSet<Hyperplane> {
        let mut out = HashSet::new();
        let side = 2 * h + 1;
        for m0 in -b..=b {
            for code in 0..side.pow(n as u32) {
                let mut c = code;
                let mut m = Vec::new();
                for _ in 0..n {
                    m.push(c % side - h);
                    c /= side;
                }
                if m.iter().all(|&x| x == 0) {
                    continue;
                }
                let mut g = m0.abs();
                for &x in &m {
                    g = g.gcd(&x);
                }
                if g != 1 {
                    continue;
                }
                let neg = *m.iter().find(|&&x| x != 0).unwrap() < 0;
                let s = if neg { -1 } else { 1 };
                out.insert(hp(s * m0, &m.iter().map(|x| s * x).collect::<Vec<_>>()));
            }
        }
        out
    }

    #[test]
    fn enumeration_small_case() {
        let all: Vec<_> = enumerate_hyperplanes(2, 1, 1).collect();
        assert_eq!(all.len(), oracle(2, 1, 1).len());
        assert_eq!(all.len(), 12);
        let through_origin: Vec<_> = enumerate_hyperplanes(2, 1, 0).collect();
        for h in [hp(0, &[1, 0]), hp(0, &[0, 1]), hp(0, &[1, 1]), hp(0, &[1, -1])] {
            assert!(through_origin.contains(&h));
        }
    }

    #[test]
    fn enumeration_matches_oracle() {
        for h in 1..=3 {
            for b in 0..=3 {
                let got: Vec<_> = enumerate_hyperplanes(2, h as u32, b as u32).collect();
                let set: HashSet<_> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len(), "duplicates at H={h}, B={b}");
                assert_eq!(set, oracle(2, h, b));
                assert!(got.iter().all(|x| x.height() <= BigInt::from(h)));
                assert!(got.windows(2).all(|w| w[0] < w[1]));
            }
        }
        let got: HashSet<_> = enumerate_hyperplanes(3, 2, 2).collect();
        assert_eq!(got, oracle(3, 2, 2));
    }

    #[test]
    fn linform_examples() {
        let b = bx(&[(rat(1, 4), rat(1, 2)), (int(0), int(1))]);
        assert_eq!(interval_linform(&hp(0, &[1, 0]), &b).unwrap(), RatInterval::new(rat(1, 4), rat(1, 2)).unwrap());
        let b = bx(&[(int(0), int(1)), (int(0), int(1))]);
        assert_eq!(interval_linform(&hp(1, &[2, -3]), &b).unwrap(), RatInterval::new(int(-4), int(1)).unwrap());
        let b = bx(&[(int(0), rat(1, 3)), (rat(2, 3), int(1))]);
        let f = interval_linform(&hp(0, &[1, 1]), &b).unwrap();
        assert_eq!(f, RatInterval::new(rat(2, 3), rat(4, 3)).unwrap());
        assert!(!f.contains_zero());
    }

    #[test]
    fn meeting_matches_filter() {
        let b = bx(&[(rat(1, 5), rat(2, 7)), (rat(3, 4), rat(4, 5))]);
        let fast: HashSet<_> = hyperplanes_meeting(&b, 4).into_iter().collect();
        let slow: HashSet<_> = enumerate_hyperplanes(2, 4, 10)
            .filter(|h| interval_linform(h, &b).unwrap().contains_zero())
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&hp(1, &[2, -3])).unwrap();
        assert_eq!(s, r#"{"m0":1,"m":[2,-3]}"#);
        assert_eq!(serde_json::from_str::<Hyperplane>(&s).unwrap(), hp(1, &[2, -3]));
        assert!(serde_json::from_str::<Hyperplane>(r#"{"m0":2,"m":[2,4]}"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn primitive_is_idempotent(m0 in -50i64..50, a in -50i64..50, b in -50i64..50, c in 1i64..6) {
            proptest::prop_assume!(a != 0 || b != 0);
            let big = |v: i64| BigInt::from(v);
            let p = Hyperplane::make_primitive(big(c * m0), vec![big(c * a), big(c * b)]).unwrap();
            let again = Hyperplane::make_primitive(p.m0().clone(), p.m().to_vec()).unwrap();
            proptest::prop_assert_eq!(&again, &p);
            let g = content(&big(c * m0), &[big(c * a), big(c * b)]);
            proptest::prop_assert_eq!(p.height() * g, big((c * a).abs().max((c * b).abs())));
        }

        #[test]
        fn linform_encloses_samples(m0 in -5i64..5, a in -5i64..5, b in -5i64..5,
                                    x0 in -20i64..20, w0 in 0i64..20, x1 in -20i64..20, w1 in 0i64..20) {
            proptest::prop_assume!(a != 0 || b != 0);
            let h = Hyperplane::make_primitive(BigInt::from(m0), vec![BigInt::from(a), BigInt::from(b)]).unwrap();
            let bb = bx(&[(rat(x0, 7), rat(x0 + w0, 7)), (rat(x1, 5), rat(x1 + w1, 5))]);
            let f = interval_linform(&h, &bb).unwrap();
            let mut pts = bb.corners();
            pts.push(bb.midpoint());
            for p in pts {
                proptest::prop_assert!(f.contains(&h.form_value(&p)));
            }
        }
    }
}
