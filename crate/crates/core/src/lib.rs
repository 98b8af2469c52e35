//! Singular vectors on Cantor-type product sets.
//!
//! The crate builds vectors `ξ` in a product of digit-restricted sets for
//! which the dual approximation function `ψ_{Φ,ξ}` stays below a prescribed
//! non-increasing `φ`, and records the construction as a certificate that
//! can be re-checked with exact rational arithmetic. Around that core sit
//! brute-force evaluators for `ψ`, record staircases, Dirichlet checks,
//! badly approximable subspace infima, and the associated exponent bounds.

pub mod approx;
pub mod arith;
pub mod bounds;
pub mod construct;
pub mod digits;
pub mod error;
pub mod hyperplane;
pub mod scalar;

pub use arith::interval::Interval;
pub use arith::poly::Poly;
pub use arith::power::RootPower;
pub use arith::real::{PrefixPolicy, RealDescriptor};
pub use arith::region::RatBox;
pub use digits::{Cylinder, DigitSystem, ProductSet};
pub use error::{Error, Result};
pub use hyperplane::{enumerate_hyperplanes, interval_linform, Hyperplane};

/// Exact rationals used throughout the certified paths.
pub type Rational = num_rational::BigRational;
pub type RatInterval = Interval<Rational>;
pub type RatPoly = Poly<Rational>;
