//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by parameter construction, parsing, and the action engines.
///
/// Mismatched [`WittParams`](crate::WittParams) between operands of ring
/// arithmetic is a programming error and panics instead of returning a value
/// of this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precision exponent must be at least 1")]
    ZeroPrecision,

    #[error("residue degree f must be at least 1")]
    ZeroResidueDegree,

    #[error("p^f overflows the supported range")]
    ParameterOverflow,

    #[error("element is not a unit (its residue mod p vanishes)")]
    NonUnit,

    #[error("syntax error in element expression: {0}")]
    Syntax(String),

    #[error(
        "denominator exponent {needed} exceeds the precision budget {budget}; \
         rerun with a larger u1 truncation budget"
    )]
    PrecisionBudget { needed: u32, budget: u32 },

    #[error("series composition requires the inner series to have zero constant term")]
    NonzeroConstantTerm,

    #[error("series inversion requires a unit constant term")]
    NonUnitConstantTerm,

    #[error("this operation requires an odd residue degree f, got f = {f}")]
    EvenResidueDegree { f: u32 },

    #[error("this operation requires q = p, got q = {q} with p = {p}")]
    QMustEqualP { q: u64, p: u64 },

    #[error("tree enumeration exceeded the configured ceiling of {ceiling} trees")]
    TreeCeiling { ceiling: u64 },

    #[error("coefficient of u1^{degree} fails the integrality guarantee")]
    IntegralityViolation { degree: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
