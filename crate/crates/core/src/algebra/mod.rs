//! Exact-arithmetic substrate: terms, coefficients, admissible orderings and
//! sparse multivariate polynomials.
//!
//! Every value here is immutable once built and every operation is a pure
//! function, so polynomials can be shared freely across threads.

mod coeff;
mod context;
mod ordering;
mod poly;
mod term;

pub use coeff::{Coefficient, Residue};
pub use context::{Field, RingContext};
pub use ordering::{OrderKind, TermOrdering};
pub use poly::{PolyDisplay, Polynomial};
pub use term::{Term, TermDisplay};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("exponent overflow in variable {0}")]
    ExponentOverflow(usize),
    #[error("term does not divide")]
    NotDivisible,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero coefficient")]
    DivisionByZero,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
