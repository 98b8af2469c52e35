use thiserror::Error;

use crate::hyperplane::Hyperplane;

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebraic descriptor is not isolating: {roots} roots in the bracket")]
    NonIsolating { roots: usize },
    #[error("hyperplane coefficients are not primitive (gcd = {gcd})")]
    NotPrimitive { gcd: String },
    #[error("linear form has zero coefficient vector")]
    ZeroForm,
    #[error("zero integer vector")]
    ZeroVector,
    #[error("no nonzero integer vector satisfies the bound")]
    EmptyRange,
    #[error("precision exhausted: enclosure width {width} exceeds tolerance {tol}; {hint}")]
    PrecisionExhausted {
        width: String,
        tol: String,
        hint: String,
    },
    #[error("record value enclosure contains zero at threshold {threshold}")]
    DegenerateRecord { threshold: String },
    #[error("cylinder descent exhausted at step {step} without separating hyperplane {hyperplane}")]
    DepthExhausted { step: usize, hyperplane: Hyperplane },
    #[error("no anchor rational with large enough Φ in coordinate {coordinate} at step {step}")]
    NoRationalFound { step: usize, coordinate: usize },
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("bad dimensions: {0}")]
    BadDims(String),
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
