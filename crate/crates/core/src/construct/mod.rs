//! Nested-box construction of vectors with `ψ_{Φ,ξ} <= φ`, its
//! certificate format, and an independent verifier.
//!
//! Each step pins one of the first two coordinates to a rational
//! `p/q` of the corresponding digit set and shrinks a product of
//! cylinders so that
//!
//! 1. the new hull box lies strictly inside the previous one,
//! 2. `Φ(q)` strictly increases from step to step,
//! 3. no hyperplane of height `<= H_ν` other than the current pin meets the box,
//! 4. `|q_ν ξ_k − p_ν| < φ(Φ(q_{ν+1}))` on the next box,
//! 5. the pinned hyperplane meets the box.

mod build;
mod verify;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::approx::NormSpec;
use crate::arith::power::RootPower;
use crate::arith::rational::{fmt_rat, parse_rat, serde_bigint, serde_rat};
use crate::error::{Error, Result};
use crate::{Hyperplane, ProductSet, RatBox, Rational};

pub use build::{construct, extend, refine_point};
pub use verify::{default_spot_checks, verify_certificate, SpotCheck, StepCheck, VerificationReport};

/// Certificate format version understood by this crate.
pub const CERT_VERSION: u32 = 1;

/// A breakpoint of a piecewise-constant bound: `φ(t) = v` from `t` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablePoint {
    #[serde(with = "serde_rat")]
    pub t: Rational,
    #[serde(with = "serde_rat")]
    pub v: Rational,
}

/// The non-increasing target `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PhiSpec {
    /// `t ↦ t^{-N}`.
    Power {
        #[serde(with = "serde_rat")]
        n: Rational,
    },
    /// Value of the last breakpoint `<= t`; the first value below it.
    Table { points: Vec<TablePoint> },
}

impl PhiSpec {
    /// `pow:N`, `const:v` or `table:t1=v1,t2=v2,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("phi must be pow:N, const:v or table:t=v,..., got {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let phi = match kind {
            "pow" => PhiSpec::Power { n: parse_rat(rest)? },
            "const" => PhiSpec::Table {
                points: vec![TablePoint {
                    t: Rational::zero(),
                    v: parse_rat(rest)?,
                }],
            },
            "table" => PhiSpec::Table {
                points: rest
                    .split(',')
                    .map(|p| {
                        let (t, v) = p.split_once('=').ok_or_else(bad)?;
                        Ok(TablePoint {
                            t: parse_rat(t)?,
                            v: parse_rat(v)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            _ => return Err(bad()),
        };
        phi.validate()?;
        Ok(phi)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PhiSpec::Power { n } if !n.is_positive() => Err(Error::Invalid("phi exponent must be positive".into())),
            PhiSpec::Power { .. } => Ok(()),
            PhiSpec::Table { points } => {
                if points.is_empty() || points.iter().any(|p| !p.v.is_positive()) {
                    return Err(Error::Invalid("phi table needs positive values".into()));
                }
                if points.windows(2).any(|w| w[0].t >= w[1].t || w[0].v < w[1].v) {
                    return Err(Error::Invalid("phi table must have increasing t and non-increasing values".into()));
                }
                Ok(())
            }
        }
    }

    /// `φ(t)` as an exact power when `φ` is a power function.
    fn power_value(n: &Rational, t: &RootPower) -> RootPower {
        t.pow(&-n.clone())
    }

    fn table_value<'a>(points: &'a [TablePoint], t: &RootPower) -> &'a Rational {
        let k = points.partition_point(|p| t.cmp_rational(&p.t) != Ordering::Less);
        &points[k.saturating_sub(1)].v
    }

    /// A rational `<= φ(t)`.
    pub fn lower(&self, t: &RootPower) -> Rational {
        match self {
            PhiSpec::Power { n } => Self::power_value(n, t).lower_bound(64),
            PhiSpec::Table { points } => Self::table_value(points, t).clone(),
        }
    }

    /// Exact comparison of `φ(t)` with `x`.
    pub fn cmp_at(&self, t: &RootPower, x: &Rational) -> Ordering {
        match self {
            PhiSpec::Power { n } => Self::power_value(n, t).cmp_rational(x),
            PhiSpec::Table { points } => Self::table_value(points, t).cmp(x),
        }
    }

    /// `φ(t)` written exactly.
    pub fn exact_string(&self, t: &RootPower) -> String {
        match self {
            PhiSpec::Power { n } => Self::power_value(n, t).to_exact_string(),
            PhiSpec::Table { points } => fmt_rat(Self::table_value(points, t)),
        }
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Power { n } => write!(f, "pow:{}", fmt_rat(n)),
            PhiSpec::Table { points } => {
                let parts: Vec<String> = points.iter().map(|p| format!("{}={}", fmt_rat(&p.t), fmt_rat(&p.v))).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

/// Height thresholds `ν ↦ H_ν` for hyperplane avoidance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule", into = "RawSchedule")]
pub enum Schedule {
    /// `H_ν = ν + offset`.
    Linear { offset: u32 },
    /// Listed heights, continued by `+1` per step after the last entry.
    Table { heights: Vec<u32> },
}

#[derive(Serialize, Deserialize)]
struct RawSchedule {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    heights: Option<Vec<u32>>,
}

impl TryFrom<RawSchedule> for Schedule {
    type Error = Error;

    fn try_from(r: RawSchedule) -> Result<Self> {
        let s = match (r.kind.as_str(), r.offset, r.heights) {
            ("linear", Some(offset), None) => Schedule::Linear { offset },
            ("table", None, Some(heights)) => Schedule::Table { heights },
            _ => return Err(Error::Schema(format!("bad avoidance schedule of kind {:?}", r.kind))),
        };
        s.validate()?;
        Ok(s)
    }
}

impl From<Schedule> for RawSchedule {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Linear { offset } => RawSchedule {
                kind: "linear".into(),
                offset: Some(offset),
                heights: None,
            },
            Schedule::Table { heights } => RawSchedule {
                kind: "table".into(),
                offset: None,
                heights: Some(heights),
            },
        }
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Linear { offset: 2 }
    }
}

impl Schedule {
    pub fn height(&self, nu: usize) -> u32 {
        match self {
            Schedule::Linear { offset } => nu as u32 + offset,
            Schedule::Table { heights } => match heights.get(nu - 1) {
                Some(&h) => h,
                None => heights.last().copied().unwrap_or(0) + (nu - heights.len()) as u32,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Table { heights } if heights.is_empty() || heights.windows(2).any(|w| w[0] > w[1]) => {
                Err(Error::Invalid("height schedule must be nonempty and non-decreasing".into()))
            }
            _ => Ok(()),
        }
    }
}

fn default_max_depth() -> usize {
    64
}

/// Everything `construct` needs; stored verbatim in the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub product: ProductSet,
    pub norm: NormSpec,
    pub phi: PhiSpec,
    pub steps: usize,
    #[serde(default)]
    pub avoidance_schedule: Schedule,
    /// Extra cylinder levels the avoidance search may add in one step.
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
}

impl ConstructionSpec {
    pub fn new(product: ProductSet, norm: NormSpec, phi: PhiSpec, steps: usize) -> Result<Self> {
        let spec = ConstructionSpec {
            product,
            norm,
            phi,
            steps,
            avoidance_schedule: Schedule::default(),
            max_depth: default_max_depth(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Invalid("steps must be at least 1".into()));
        }
        self.norm.check_dims(self.product.dims())?;
        self.phi.validate()?;
        self.avoidance_schedule.validate()
    }
}

/// `Φ` values are written as `"p/q"` or `"p/q^a/b"`.
mod serde_power {
    use super::*;

    pub fn serialize<S: Serializer>(x: &RootPower, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_exact_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RootPower, D::Error> {
        RootPower::parse(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderRecord {
    pub prefix: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub nu: usize,
    /// Pinned coordinate, 1 or 2.
    pub k: usize,
    #[serde(with = "serde_bigint")]
    pub p: BigInt,
    #[serde(with = "serde_bigint")]
    pub q: BigInt,
    #[serde(with = "serde_power")]
    pub phi_of_q: RootPower,
    /// A rational lower bound for `φ(Φ(q_{ν+1}))`; absent on the last step.
    #[serde(with = "serde_rat::opt")]
    pub bound_used: Option<Rational>,
    #[serde(rename = "box")]
    pub hull: RatBox,
    pub cylinders: Vec<CylinderRecord>,
}

impl Step {
    /// The pinned hyperplane `q ξ_k = p`.
    pub fn pin(&self, n: usize) -> Result<Hyperplane> {
        let mut m = vec![BigInt::zero(); n];
        m[self.k - 1] = self.q.clone();
        Hyperplane::new(self.p.clone(), m)
    }

    pub fn pin_value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidedRecord {
    pub nu: usize,
    #[serde(with = "serde_bigint")]
    pub m0: BigInt,
    #[serde(with = "serde_bigint::vec")]
    pub m: Vec<BigInt>,
}

impl AvoidedRecord {
    pub fn new(nu: usize, h: &Hyperplane) -> Self {
        AvoidedRecord {
            nu,
            m0: h.m0().clone(),
            m: h.m().to_vec(),
        }
    }

    pub fn hyperplane(&self) -> Result<Hyperplane> {
        Hyperplane::new(self.m0.clone(), self.m.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub spec: ConstructionSpec,
    pub steps: Vec<Step>,
    pub avoided: Vec<AvoidedRecord>,
    pub final_box: RatBox,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parses a certificate, rejecting other format versions.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        match raw.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == CERT_VERSION as u64 => {}
            Some(v) => return Err(Error::Schema(format!("unsupported certificate version {v}"))),
            None => return Err(Error::Schema("missing certificate version".into())),
        }
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// `Φ(q_1)` and `Φ(q_last)`.
    pub fn phi_range(&self) -> (RootPower, RootPower) {
        (
            self.steps.first().unwrap().phi_of_q.clone(),
            self.steps.last().unwrap().phi_of_q.clone(),
        )
    }

    /// Widths of the final box.
    pub fn final_widths(&self) -> Vec<Rational> {
        self.final_box.widths()
    }
}

/// `Φ(q e_k)` for the 1-based coordinate `k`.
pub fn phi_of_pin(norm: &NormSpec, k: usize, q: &BigInt) -> Result<RootPower> {
    if q.is_zero() {
        return Err(Error::ZeroVector);
    }
    norm.phi_axis(k - 1, q)
}
