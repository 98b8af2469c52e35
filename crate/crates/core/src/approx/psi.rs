//! The irrationality measure function `ψ_{Φ,ξ}`, its record staircase,
//! Dirichlet checks and finite-range exponent estimates.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::approx::kernel::{shell_pieces, FormGrid, Piece};
use crate::approx::norm::NormSpec;
use crate::arith::power::RootPower;
use crate::arith::rational::{fmt_magnitude, fmt_rat, ln_rat, pow2};
use crate::error::{Error, Result};
use crate::{RatInterval, Rational, RealDescriptor};

/// Starting working precision for irrational coordinates, in bits.
pub const START_BITS: u64 = 96;
/// Refinement stops with `PrecisionExhausted` beyond this precision.
pub const MAX_BITS: u64 = 8192;

/// A value enclosure together with a vector attaining its upper end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approx {
    pub value: RatInterval,
    pub witness: Vec<i64>,
}

/// Default tolerance on enclosure widths.
pub fn default_tol() -> Rational {
    pow2(-64)
}

fn bounds_i64(b: &[BigInt]) -> Result<Vec<i64>> {
    b.iter()
        .map(|x| {
            x.to_i64()
                .filter(|v| *v < 1 << 31)
                .ok_or_else(|| Error::Invalid(format!("enumeration bound {x} is too large")))
        })
        .collect()
}

fn exhausted(width: &Rational, tol: &Rational) -> Error {
    Error::PrecisionExhausted {
        width: fmt_magnitude(width),
        tol: fmt_magnitude(tol),
        hint: "loosen the tolerance or describe the coordinates exactly".into(),
    }
}

/// Scans `pieces` with doubling precision until the enclosure is exact or
/// narrower than `tol`.
fn refine_scan(entries: &[Vec<RealDescriptor>], pieces: &[Piece], tol: &Rational) -> Result<Option<Approx>> {
    let mut bits = START_BITS;
    loop {
        let grid = FormGrid::build(entries, bits)?;
        let Some(r) = grid.scan(pieces) else {
            return Ok(None);
        };
        let width = r.value.width();
        if grid.is_exact() || width <= *tol {
            return Ok(Some(Approx {
                value: r.value,
                witness: r.witness,
            }));
        }
        if bits >= MAX_BITS {
            return Err(exhausted(&width, tol));
        }
        bits *= 2;
    }
}

/// `ψ_{Φ,ξ}(t) = min { ⟨q·ξ⟩ : q ∈ ℤⁿ∖{0}, Φ(q) <= t }`.
///
/// Among minimizers the witness is the first in the order
/// `0, 1, −1, 2, −2, …` applied coordinatewise, with the sign of `q`
/// normalized so that its first nonzero coordinate is positive.
pub fn psi(norm: &NormSpec, xi: &[RealDescriptor], t: &RootPower, tol: &Rational) -> Result<Approx> {
    let n = xi.len();
    if n < 2 {
        return Err(Error::BadDims(format!("n ≥ 2 required, got {n}")));
    }
    norm.check_dims(n)?;
    let bounds = bounds_i64(&norm.coord_bounds(n, t))?;
    if bounds.iter().all(|&b| b == 0) {
        return Err(Error::EmptyRange);
    }
    refine_scan(&[xi.to_vec()], &shell_pieces(&bounds, None), tol)?.ok_or(Error::EmptyRange)
}

/// `min_{0 < q <= t} max_i ⟨q ξ_i⟩`; ties go to the smallest `q`.
pub fn psi_simultaneous(xi: &[RealDescriptor], t: &Rational, tol: &Rational) -> Result<Approx> {
    if xi.is_empty() {
        return Err(Error::BadDims("empty vector".into()));
    }
    let b = bounds_i64(&[t.floor().to_integer()])?;
    if b[0] < 1 {
        return Err(Error::EmptyRange);
    }
    let rows: Vec<Vec<RealDescriptor>> = xi.iter().map(|x| vec![x.clone()]).collect();
    refine_scan(&rows, &shell_pieces(&b, None), tol)?.ok_or(Error::EmptyRange)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirichletMode {
    Dual,
    Simultaneous,
}

/// Confirms Dirichlet's bound at integer `t`: `ψ_sup(t) <= t^{-n}` (dual)
/// or `ψ_sim(t) <= t^{-1/n}` (simultaneous). `false` means the computed
/// upper end exceeds the bound.
pub fn dirichlet_check(xi: &[RealDescriptor], t: u64, mode: DirichletMode) -> Result<bool> {
    if t == 0 {
        return Err(Error::Invalid("t must be at least 1".into()));
    }
    let n = xi.len() as i64;
    let tr = Rational::from_integer(t.into());
    let tol = default_tol();
    match mode {
        DirichletMode::Dual => {
            let r = psi(&NormSpec::Sup, xi, &RootPower::integer(t)?, &tol)?;
            Ok(r.value.hi() <= &(Rational::one() / num_traits::pow(tr, n as usize)))
        }
        DirichletMode::Simultaneous => {
            let r = psi_simultaneous(xi, &tr, &tol)?;
            let bound = RootPower::new(tr, Rational::new((-1).into(), n.into()))?;
            Ok(bound.cmp_rational(r.value.hi()) != std::cmp::Ordering::Less)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordEntry {
    /// `Φ(q)` of the witness; `ψ` equals `value` from here to the next threshold.
    pub threshold: RootPower,
    pub value: RatInterval,
    pub witness: Vec<i64>,
}

/// The staircase of strict records of `⟨q·ξ⟩` against `Φ(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RecordSequence {
    pub entries: Vec<RecordEntry>,
}

impl RecordSequence {
    /// `ψ(t)` read off the staircase, or `None` below the first threshold.
    pub fn lookup(&self, t: &RootPower) -> Option<&RecordEntry> {
        let k = self.entries.partition_point(|e| &e.threshold <= t);
        k.checked_sub(1).map(|k| &self.entries[k])
    }

    /// Columns `threshold,value_lo,value_hi,witness`; the witness is a
    /// quoted tuple.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,value_lo,value_hi,witness\n");
        for e in &self.entries {
            let w: Vec<String> = e.witness.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{},{},\"({})\"",
                e.threshold.to_exact_string(),
                fmt_rat(e.value.lo()),
                fmt_rat(e.value.hi()),
                w.join(",")
            );
        }
        out
    }
}

/// Sweeps all nonzero `q` with `Φ(q) <= t_max` in order of `Φ`, recording
/// each strict decrease of the running minimum.
pub fn record_sequence(norm: &NormSpec, xi: &[RealDescriptor], t_max: &RootPower, tol: &Rational) -> Result<RecordSequence> {
    let n = xi.len();
    if n < 2 {
        return Err(Error::BadDims(format!("n ≥ 2 required, got {n}")));
    }
    norm.check_dims(n)?;
    let bounds = bounds_i64(&norm.coord_bounds(n, t_max))?;
    let mut events: Vec<(RootPower, usize, i64)> = Vec::new();
    for (j, &b) in bounds.iter().enumerate() {
        for m in 1..=b {
            events.push((norm.phi_axis(j, &BigInt::from(m))?, j, m));
        }
    }
    events.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut bits = START_BITS;
    'refine: loop {
        let grid = FormGrid::build(&[xi.to_vec()], bits)?;
        let mut entries: Vec<RecordEntry> = Vec::new();
        let mut cur = vec![0i64; n];
        let mut min_lo: Option<Rational> = None;
        let mut i = 0;
        while i < events.len() {
            let old = cur.clone();
            let level = events[i].0.clone();
            while i < events.len() && events[i].0 == level {
                cur[events[i].1] = events[i].2;
                i += 1;
            }
            let Some(r) = grid.scan(&shell_pieces(&cur, Some(&old))) else {
                continue;
            };
            if min_lo.as_ref().is_none_or(|m| r.value.lo() < m) {
                min_lo = Some(r.value.lo().clone());
            }
            let lo = min_lo.clone().unwrap();
            if entries.last().is_none_or(|e| r.value.hi() < e.value.hi()) {
                let value = RatInterval::new(lo, r.value.hi().clone())?;
                if !grid.is_exact() && value.width() > *tol {
                    if bits >= MAX_BITS {
                        return Err(exhausted(&value.width(), tol));
                    }
                    bits *= 2;
                    continue 'refine;
                }
                entries.push(RecordEntry {
                    threshold: level,
                    value,
                    witness: r.witness,
                });
            }
        }
        return Ok(RecordSequence { entries });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    /// Minimum of the local exponents over the last half of the range.
    pub gamma_hat: f64,
    /// `−ln v_k / ln T_{k+1}` for consecutive records.
    pub local: Vec<f64>,
}

/// A finite-range proxy for the uniform exponent: the record `v_k` is in
/// force up to the next threshold `T_{k+1}`, so `ψ(t) <= t^{-γ}` holds on
/// that stretch with `γ = −ln v_k / ln T_{k+1}`. Nothing is claimed about
/// the limit.
pub fn exponent_estimate(rs: &RecordSequence) -> Result<ExponentEstimate> {
    if let Some(e) = rs.entries.iter().find(|e| e.value.lo().is_zero()) {
        return Err(Error::DegenerateRecord {
            threshold: e.threshold.to_exact_string(),
        });
    }
    if rs.entries.len() < 2 {
        return Err(Error::Invalid("at least two records are needed".into()));
    }
    let local: Vec<f64> = rs
        .entries
        .windows(2)
        .map(|w| -ln_rat(w[0].value.hi()) / w[1].threshold.ln())
        .collect();
    let tail = &local[local.len() / 2..];
    let gamma_hat = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ExponentEstimate { gamma_hat, local })
}
