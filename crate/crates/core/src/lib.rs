//! Exact symbolic computation of quotient spaces by algebraic foliations.
//!
//! The crate is organised around the pipeline it implements:
//!
//! * [`poly`] — sparse multivariate polynomials over the rationals, Gröbner
//!   bases, elimination and localised rings (the computational substrate),
//! * [`diffmod`] — Kähler differentials, distributions presented as quotients
//!   of the module of one-forms, module Gröbner bases and the foliated
//!   exterior derivative,
//! * [`foliation`] — involutivity, Lie brackets, restriction to distinguished
//!   opens and invariance of ring morphisms,
//! * [`first_integrals`] — degree-bounded computation of rings of first
//!   integrals with generators and relations,
//! * [`stability`] — smoothness / relative-dimension / connected-fibre
//!   certificates for candidate quotient charts,
//! * [`quotient`] — overlap algebras, transition maps, cocycle checks and
//!   atlas assembly.
//!
//! All arithmetic is exact; no floating point is used anywhere in the core.
//! Data-parallel inner loops (batch differentials, pairwise checks, chart
//! certification) go through [`exec`], which uses rayon when the `parallel`
//! feature (default) is enabled and plain iterators otherwise.

pub mod exec;
pub mod poly;
pub mod diffmod;
pub mod foliation;
pub mod first_integrals;
pub mod stability;
pub mod quotient;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot invert zero")]
    ZeroDenominator,
    #[error("invalid ring: {0}")]
    BadRing(String),
    #[error("malformed morphism: {0}")]
    MalformedMorphism(String),
    #[error("chart not certified: {0}")]
    ChartNotCertified(String),
    #[error("localization recognition failure: {0}")]
    RecognitionFailure(String),
    #[error("cocycle violation: {0}")]
    CocycleViolation(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
