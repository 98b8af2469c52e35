//! Exponent bounds: closed-form constants and certified polynomial roots.
//!
//! Every root is returned as a rational enclosure whose endpoints carry
//! opposite exact signs of the defining polynomial (or as a point interval
//! when the root is rational and was hit exactly).

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::arith::poly::bisect_rational;
use crate::arith::rational::{int, pow2, rat};
use crate::error::{Error, Result};
use crate::{RatInterval, RatPoly, Rational};

/// `w_{s,n} = (s+1)/(n−s)`.
pub fn w_const(s: u32, n: u32) -> Result<Rational> {
    if s < 1 || s + 1 > n {
        return Err(Error::BadDims(format!("need 1 <= s <= n-1, got s={s}, n={n}")));
    }
    Ok(rat((s + 1) as i64, (n - s) as i64))
}

/// `x^{n+1} − w^{n−1}(1+w)x + w^n` with `w = w_{s,n}`.
pub fn w_polynomial(s: u32, n: u32) -> Result<RatPoly> {
    let w = w_const(s, n)?;
    let n = n as usize;
    let mut c = vec![Rational::zero(); n + 2];
    c[0] = num_traits::pow(w.clone(), n);
    c[1] = -(num_traits::pow(w.clone(), n - 1) * (Rational::one() + &w));
    c[n + 1] = Rational::one();
    Ok(RatPoly::new(c))
}

fn check_tol(tol: &Rational) -> Result<()> {
    if tol.is_positive() {
        Ok(())
    } else {
        Err(Error::Invalid("tolerance must be positive".into()))
    }
}

fn solve_unique(p: &RatPoly, lo: &Rational, hi: &Rational, tol: &Rational) -> Result<RatInterval> {
    let roots = p.count_roots(lo, hi);
    if roots != 1 {
        return Err(Error::BracketFailure(format!(
            "expected one root of {p} in [{lo}, {hi}], found {roots}"
        )));
    }
    bisect_rational(p, lo, hi, tol)
}

/// The unique root of `w_polynomial(s, n)` in `(0, w_{s,n})`.
///
/// `w` itself is always a root and `f(0) = w^n > 0`, so the search first
/// walks `w(1 − 2^{-k})` down to a point of negative sign.
#[allow(non_snake_case)]
pub fn W_root(s: u32, n: u32, tol: &Rational) -> Result<RatInterval> {
    check_tol(tol)?;
    let w = w_const(s, n)?;
    let p = w_polynomial(s, n)?;
    let zero = Rational::zero();
    let at_w = usize::from(p.sign_at(&w) == Ordering::Equal);
    if p.count_roots(&zero, &w) != 1 + at_w || p.sign_at(&zero) == Ordering::Equal {
        return Err(Error::BracketFailure(format!("{p} lacks a unique root in (0, {w})")));
    }
    for k in 1..=256 {
        let c = &w * (Rational::one() - pow2(-k));
        if p.sign_at(&c) == Ordering::Less {
            return solve_unique(&p, &zero, &c, tol);
        }
    }
    Err(Error::BracketFailure(format!("no negative value of {p} found below {w}")))
}

/// `x + Σ_{k=1}^{n−1} x^{k+1}/(s−1)^k − 1`.
pub fn h_polynomial(n: u32, s_deg: u32) -> Result<RatPoly> {
    if n < 2 || s_deg < 2 {
        return Err(Error::BadDims(format!("need n >= 2 and s >= 2, got n={n}, s={s_deg}")));
    }
    let d = (n - 1) as usize;
    let r = Rational::one() / int(s_deg as i64 - 1);
    let mut c = vec![Rational::zero(); d + 2];
    c[0] = -Rational::one();
    c[1] = Rational::one();
    for k in 1..=d {
        c[k + 1] = num_traits::pow(r.clone(), k);
    }
    Ok(RatPoly::new(c))
}

/// The unique positive root of `1 − x = x Σ_{k=1}^{n−1} (x/(s−1))^k`; it lies in `(0, 1)`.
#[allow(non_snake_case)]
pub fn H_root(n: u32, s_deg: u32, tol: &Rational) -> Result<RatInterval> {
    check_tol(tol)?;
    let p = h_polynomial(n, s_deg)?;
    solve_unique(&p, &Rational::zero(), &Rational::one(), tol)
}

/// `g(x) = (1−ω)x^n − x^{n−1} + ω`.
pub fn g_polynomial(n: u32, omega: &Rational) -> RatPoly {
    let n = n as usize;
    let mut c = vec![Rational::zero(); n + 1];
    c[0] = omega.clone();
    c[n - 1] = -Rational::one();
    c[n] = Rational::one() - omega;
    RatPoly::new(c)
}

/// `g(x) / (x − 1) = (1−ω)x^{n−1} − ω Σ_{k=0}^{n−2} x^k`.
pub fn g_cofactor(n: u32, omega: &Rational) -> RatPoly {
    let n = n as usize;
    let mut c = vec![-omega.clone(); n];
    c[n - 1] = Rational::one() - omega;
    RatPoly::new(c)
}

/// The root of `g` in `[1, ∞)` that is not the trivial root `x = 1`.
///
/// Since `g(1) = 0` for every `ω`, the search runs on the cofactor; when the
/// cofactor also vanishes at 1 (`ω = 1/n`) the answer is exactly `[1, 1]`.
#[allow(non_snake_case)]
pub fn G_root(n: u32, omega: &Rational, tol: &Rational) -> Result<RatInterval> {
    check_tol(tol)?;
    if n < 2 {
        return Err(Error::BadDims(format!("need n >= 2, got {n}")));
    }
    if omega < &rat(1, n as i64) || omega >= &Rational::one() {
        return Err(Error::Invalid("need 1/n <= omega < 1".into()));
    }
    let h = g_cofactor(n, omega);
    let one = Rational::one();
    if h.sign_at(&one) == Ordering::Equal {
        return Ok(RatInterval::point(one));
    }
    let mut hi = int(2);
    while h.sign_at(&hi) != Ordering::Greater {
        hi *= int(2);
    }
    solve_unique(&h, &one, &hi, tol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferenceConstants {
    /// `1/(n−1)`.
    pub unweighted: Rational,
    /// `1/(n(1−δ))` with `δ = min s_j`.
    pub weighted: Option<Rational>,
    /// `(n²+1)/(n(n²−1))`.
    pub kw2005: Rational,
}

/// Checks `s ∈ (0,1)^n` with `Σ s_j = 1`.
pub fn check_weights(s: &[Rational], n: usize) -> Result<()> {
    if s.len() != n {
        return Err(Error::BadWeights(format!("expected {n} weights, got {}", s.len())));
    }
    if s.iter().any(|x| !x.is_positive() || x >= &Rational::one()) {
        return Err(Error::BadWeights("weights must lie in (0, 1)".into()));
    }
    if s.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::BadWeights("weights must sum to 1".into()));
    }
    Ok(())
}

pub fn transference_constants(n: u32, s: Option<&[Rational]>) -> Result<TransferenceConstants> {
    if n < 2 {
        return Err(Error::BadDims(format!("need n >= 2, got {n}")));
    }
    let nn = int(n as i64);
    let unweighted = Rational::one() / (&nn - Rational::one());
    let kw2005 = (&nn * &nn + Rational::one()) / (&nn * (&nn * &nn - Rational::one()));
    assert_eq!(
        kw2005,
        &unweighted - Rational::one() / (&nn * (&nn + Rational::one()))
    );
    assert!(kw2005 < unweighted);
    let weighted = match s {
        None => None,
        Some(s) => {
            check_weights(s, n as usize)?;
            let delta = s.iter().min().unwrap();
            Some(Rational::one() / (&nn * (Rational::one() - delta)))
        }
    };
    Ok(TransferenceConstants {
        unweighted,
        weighted,
        kw2005,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop51Bound {
    pub linear: Rational,
    pub refined: RatInterval,
}

/// The pair `(w_{s,n}, W_{s,n})`.
pub fn prop51_bound(s: u32, n: u32, tol: &Rational) -> Result<Prop51Bound> {
    let linear = w_const(s, n)?;
    let refined = W_root(s, n, tol)?;
    assert!(refined.hi() < &linear);
    Ok(Prop51Bound { linear, refined })
}

/// One row of the table of worked upper bounds for `ω̂` on subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceExample {
    pub s: u32,
    pub n: u32,
    pub w: Rational,
    /// Only present when the refined bound is quoted.
    pub polynomial: Option<RatPoly>,
    pub root: Option<RatInterval>,
}

/// `(s, n) = (1, 4)`, `(1, 2)`, `(1, 3)`, `(2, 3)`: the linear bound for the
/// first, the refined root for the rest.
pub fn reference_examples(tol: &Rational) -> Result<Vec<ReferenceExample>> {
    let mut out = vec![ReferenceExample {
        s: 1,
        n: 4,
        w: w_const(1, 4)?,
        polynomial: None,
        root: None,
    }];
    for (s, n) in [(1, 2), (1, 3), (2, 3)] {
        out.push(ReferenceExample {
            s,
            n,
            w: w_const(s, n)?,
            polynomial: Some(w_polynomial(s, n)?),
            root: Some(W_root(s, n, tol)?),
        });
    }
    Ok(out)
}
