//! Crate-wide error type.
//!
//! Every failure mode carries enough context to be actionable, and maps to a
//! process exit code for the CLI: 2 for parse errors, 3 for validation errors,
//! 4 for duality mismatches (emitted by the CLI itself), 5 for integrality
//! tripwires (exact-arithmetic averages that must be integers but are not —
//! these indicate either an invalid instance or an internal bug and are never
//! rounded over).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LgError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected a square exponent matrix: {monomials} monomials over {variables} variables")]
    NotSquare { monomials: usize, variables: usize },

    #[error("exponent matrix is singular")]
    SingularMatrix,

    #[error("no Fermat/chain/loop decomposition exists")]
    NotAtomicShape,

    #[error("degenerate atomic type: {0}")]
    DegenerateType(String),

    #[error("weight system not strictly inside (0,1): {0}")]
    NonPositiveWeights(String),

    #[error("Milnor number is not a nonnegative integer: {0}")]
    NonIntegerMilnorNumber(String),

    #[error("group of order {order} exceeds enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u64 },

    #[error("element does not preserve the polynomial: {0}")]
    NotASymmetry(String),

    #[error("permutation does not normalize the diagonal group: {0}")]
    DoesNotNormalize(String),

    #[error("length mismatch: {0}")]
    IncompatibleLengths(String),

    #[error("element does not map the fixed locus to itself: {0}")]
    DoesNotPreserveLocus(String),

    #[error("polynomial restricts to zero on a positive-dimensional fixed locus")]
    UnexpectedZeroRestriction,

    #[error("graded character is not a polynomial: {0}")]
    NonPolynomialCharacter(String),

    #[error("Molien average is not a nonnegative integer: {0}")]
    NonIntegralMolienAverage(String),

    #[error("Burnside average is not an integer: {0}")]
    NonIntegralBurnsideAverage(String),

    #[error("Lefschetz exponent is not an integer: {0}")]
    NonIntegralLefschetzExponent(String),

    #[error("monomial support lies outside the fixed locus")]
    SupportOutsideFixedLocus,

    #[error("mirror-route assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl LgError {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        use LgError::*;
        match self {
            Parse(_) | Io(_) => 2,
            NonIntegerMilnorNumber(_)
            | NonIntegralMolienAverage(_)
            | NonIntegralBurnsideAverage(_)
            | NonIntegralLefschetzExponent(_) => 5,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, LgError>;
