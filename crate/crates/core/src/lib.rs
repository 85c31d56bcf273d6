//! Weight distributions of a family of cyclic codes with two zeros.
//!
//! The code `C_(q,m,h,e)` lives over GF(q), q = p^s, with codewords
//! `c_(a,b) = (Tr(a g^i + b (βg)^i))_{i=0..n-1}` indexed by pairs
//! (a,b) ∈ GF(r)², r = q^m.  This crate computes the weight
//! distribution of such a code two ways:
//!
//! * exhaustive enumeration of all r² codewords ([`code`]), and
//! * a closed form for the case e = 4, N = 2 built from Gaussian
//!   periods and the point count of the elliptic curve y² = x³ + 4x
//!   ([`closedform`], [`curve`]).
//!
//! The supporting machinery — exact finite field towers, cyclotomic
//! integers, characters, and the character-sum counts f(c⃗) — lives in
//! [`ffield`], [`cyclo`], [`chars`] and [`charsum`].

pub mod chars;
pub mod charsum;
pub mod closedform;
pub mod code;
pub mod curve;
pub mod cyclo;
pub mod ffield;
pub mod report;

pub use chars::{gaussian_period_direct, periods_closed_n2, psi, MultChar, PeriodValue};
pub use charsum::ClassPattern;
pub use closedform::{closed_weight_distribution, select_case, CaseSelector};
pub use code::{derive_params, derive_params_with, CodeParams, WeightDistribution};
pub use curve::GaussInt;
pub use cyclo::CycInt;
pub use ffield::{make_field, Elem, FieldCtx};

/// Error type shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected} with coefficients in [0, p)")]
    BadModulus { expected: u32 },
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("supplied element is not a generator of the multiplicative group")]
    NotAGenerator,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("square class of zero is undefined")]
    ZeroElement,
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("subfield degree {sub} does not divide {degree}")]
    SubdegreeMismatch { sub: u32, degree: u32 },
    #[error("{n} does not divide the group order {order}")]
    BadClassOrder { n: u64, order: u64 },
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration budget exceeded: {pairs} pairs > {limit}")]
    BudgetExceeded { pairs: u128, limit: u128 },
    #[error("Gaussian periods unavailable for these parameters")]
    PeriodsUnavailable,
    #[error("expected a rational integer but extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("closed form requires e=4, N=2: {0}")]
    ClosedFormUnsupported(String),
    #[error("converted weight is not a nonnegative integer: {0}")]
    NonIntegralWeight(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
