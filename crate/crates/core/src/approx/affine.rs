//! Affine subspaces `{(x, y_0 + Y x)}` and finite-range evidence that they
//! are badly approximable.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::approx::kernel::{shell_pieces, FormGrid};
use crate::approx::psi::{Approx, MAX_BITS, START_BITS};
use crate::arith::power::RootPower;
use crate::arith::rational::fmt_magnitude;
use crate::error::{Error, Result};
use crate::{RatInterval, Rational, RealDescriptor};

/// `A = {ξ = (x, y_0 + Y x) : x ∈ ℝ^s}` inside `ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSubspaceSpec {
    pub s: usize,
    /// `n − s` entries.
    pub y0: Vec<RealDescriptor>,
    /// `(n − s) × s`, row-major.
    pub y: Vec<Vec<RealDescriptor>>,
}

impl AffineSubspaceSpec {
    pub fn new(s: usize, y0: Vec<RealDescriptor>, y: Vec<Vec<RealDescriptor>>) -> Result<Self> {
        let spec = AffineSubspaceSpec { s, y0, y };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 || self.y0.is_empty() {
            return Err(Error::BadDims(format!("need 1 ≤ s ≤ n−1, got s={} n={}", self.s, self.n())));
        }
        if self.y.len() != self.y0.len() || self.y.iter().any(|r| r.len() != self.s) {
            return Err(Error::BadDims("Y must be (n−s)×s".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.s + self.y0.len()
    }

    /// `w = (s+1)/(n−s)`.
    pub fn exponent(&self) -> Rational {
        Rational::new((self.s as i64 + 1).into(), (self.y0.len() as i64).into())
    }

    /// `Ỹ = [y_0 Y]`, of size `(n−s) × (s+1)`.
    pub fn augmented(&self) -> Vec<Vec<RealDescriptor>> {
        self.y0
            .iter()
            .zip(&self.y)
            .map(|(c, row)| std::iter::once(c.clone()).chain(row.iter().cloned()).collect())
            .collect()
    }
}

/// The point `(x, y_0 + Y x)`.
pub fn lift_affine(spec: &AffineSubspaceSpec, x: &[RealDescriptor]) -> Result<Vec<RealDescriptor>> {
    spec.validate()?;
    if x.len() != spec.s {
        return Err(Error::BadDims(format!("x has {} coordinates, expected {}", x.len(), spec.s)));
    }
    let mut out = x.to_vec();
    for (c, row) in spec.y0.iter().zip(&spec.y) {
        let terms: Vec<_> = row.iter().cloned().zip(x.iter().cloned()).collect();
        let d = RealDescriptor::affine(c.clone(), terms);
        out.push(match d.exact_value() {
            Some(v) => RealDescriptor::exact(v),
            None => d,
        });
    }
    Ok(out)
}

/// Precision used for the badness sweep. It is fixed, not refined, so the
/// per-height minima do not depend on `Q` and the infimum is monotone.
pub const BADNESS_BITS: u64 = 96;

/// `min ‖q‖^w ‖⟨Ỹq⟩‖` over `q ∈ ℤ^{s+1}` with `0 < ‖q‖ <= Q`.
pub fn badness_infimum(spec: &AffineSubspaceSpec, q_max: u64) -> Result<Approx> {
    Ok(badness_profile(spec, &[q_max])?.pop().unwrap())
}

/// The infimum at every `Q` in `qs`, from a single sweep.
pub fn badness_profile(spec: &AffineSubspaceSpec, qs: &[u64]) -> Result<Vec<Approx>> {
    spec.validate()?;
    if qs.contains(&0) {
        return Err(Error::Invalid("Q must be at least 1".into()));
    }
    let top = qs.iter().copied().max().unwrap_or(0);
    if top >= 1 << 31 {
        return Err(Error::Invalid(format!("Q = {top} is too large")));
    }
    let cols = spec.s + 1;
    let grid = FormGrid::build(&spec.augmented(), BADNESS_BITS)?;
    let w = spec.exponent();
    let mut best: Option<Approx> = None;
    let mut min_lo: Option<Rational> = None;
    let mut at = std::collections::BTreeMap::new();
    for h in 1..=top as i64 {
        let r = grid
            .scan(&shell_pieces(&vec![h; cols], Some(&vec![h - 1; cols])))
            .expect("nonempty shell");
        let f = RootPower::new(Rational::from_integer(h.into()), w.clone())?.enclose(BADNESS_BITS);
        let lo = r.value.lo() * f.lo();
        let hi = r.value.hi() * f.hi();
        if min_lo.as_ref().is_none_or(|m| &lo < m) {
            min_lo = Some(lo);
        }
        if best.as_ref().is_none_or(|b| &hi < b.value.hi()) {
            best = Some(Approx {
                value: RatInterval::new(Rational::zero(), hi)?,
                witness: r.witness,
            });
        }
        let b = best.as_ref().unwrap();
        let value = RatInterval::new(min_lo.clone().unwrap(), b.value.hi().clone())?;
        at.insert(
            h as u64,
            Approx {
                value,
                witness: b.witness.clone(),
            },
        );
    }
    Ok(qs.iter().map(|q| at[q].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma53Report {
    pub holds: bool,
    /// First `q` with `‖⟨qξ⟩‖ < c q^{-w}`.
    pub violation: Option<u64>,
}

fn point_values(xi: &[RealDescriptor], q_max: u64, w: &Rational, bits: u64) -> Result<(FormGrid, Vec<(RatInterval, RatInterval)>)> {
    let rows: Vec<Vec<RealDescriptor>> = xi.iter().map(|x| vec![x.clone()]).collect();
    let grid = FormGrid::build(&rows, bits)?;
    let mut out = Vec::with_capacity(q_max as usize);
    for q in 1..=q_max {
        let v = grid.eval(&[q as i64]);
        let f = RootPower::new(Rational::from_integer(q.into()), w.clone())?.enclose(bits);
        out.push((v, f));
    }
    Ok((grid, out))
}

/// Checks `‖⟨qξ⟩‖ >= c q^{-w}` for `1 <= q <= Q`, `ξ = lift_affine(spec, x)`,
/// `w = (s+1)/(n−s)`.
pub fn lemma53_check(spec: &AffineSubspaceSpec, x: &[RealDescriptor], q_max: u64, c: &Rational) -> Result<Lemma53Report> {
    if q_max == 0 || c <= &Rational::zero() {
        return Err(Error::Invalid("need Q ≥ 1 and c > 0".into()));
    }
    let xi = lift_affine(spec, x)?;
    let w = spec.exponent();
    let mut bits = START_BITS;
    'refine: loop {
        let (grid, vals) = point_values(&xi, q_max, &w, bits)?;
        for (i, (v, f)) in vals.iter().enumerate() {
            if &(v.lo() * f.lo()) >= c {
                continue;
            }
            if &(v.hi() * f.hi()) < c {
                return Ok(Lemma53Report {
                    holds: false,
                    violation: Some(i as u64 + 1),
                });
            }
            if grid.is_exact() && f.is_point() {
                unreachable!("exact comparison is decided");
            }
            if bits >= MAX_BITS {
                return Err(Error::PrecisionExhausted {
                    width: fmt_magnitude(&v.width()),
                    tol: fmt_magnitude(c),
                    hint: format!("cannot compare q^w‖⟨qξ⟩‖ with c at q = {}", i + 1),
                });
            }
            bits *= 2;
            continue 'refine;
        }
        return Ok(Lemma53Report {
            holds: true,
            violation: None,
        });
    }
}

/// `min_{1 <= q <= Q} q^w ‖⟨qξ⟩‖` with its minimizer.
pub fn lemma53_min(spec: &AffineSubspaceSpec, x: &[RealDescriptor], q_max: u64) -> Result<Approx> {
    if q_max == 0 {
        return Err(Error::Invalid("Q must be at least 1".into()));
    }
    let xi = lift_affine(spec, x)?;
    let (_, vals) = point_values(&xi, q_max, &spec.exponent(), START_BITS)?;
    let mut lo: Option<Rational> = None;
    let mut best: Option<(Rational, u64)> = None;
    for (i, (v, f)) in vals.iter().enumerate() {
        let (l, h) = (v.lo() * f.lo(), v.hi() * f.hi());
        if lo.as_ref().is_none_or(|m| &l < m) {
            lo = Some(l);
        }
        if best.as_ref().is_none_or(|b| h < b.0) {
            best = Some((h, i as u64 + 1));
        }
    }
    let (hi, q) = best.unwrap();
    Ok(Approx {
        value: RatInterval::new(lo.unwrap(), hi)?,
        witness: vec![q as i64],
    })
}

/// `θ = 2^{1/3}` on the line `{(x, θ + θ² x)}`; its augmented matrix is `(θ, θ²)`.
pub fn cubic_line(theta: RealDescriptor) -> AffineSubspaceSpec {
    let sq = RealDescriptor::product(theta.clone(), theta.clone());
    AffineSubspaceSpec {
        s: 1,
        y0: vec![theta],
        y: vec![vec![sq]],
    }
}
