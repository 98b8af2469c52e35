//! Bounded-range evaluation of approximation functions by exhaustive
//! enumeration.

pub mod affine;
pub mod kernel;
pub mod norm;
pub mod psi;

pub use affine::{
    badness_infimum, badness_profile, cubic_line, lemma53_check, lemma53_min, lift_affine, AffineSubspaceSpec, Lemma53Report,
};
pub use norm::NormSpec;
pub use psi::{
    default_tol, dirichlet_check, exponent_estimate, psi, psi_simultaneous, record_sequence, Approx, DirichletMode,
    ExponentEstimate, RecordEntry, RecordSequence,
};
