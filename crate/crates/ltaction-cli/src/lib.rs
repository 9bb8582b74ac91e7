//! Library backing the `ltaction` binary: command execution, rendering,
//! embedded golden vectors, and the named verification suites.

pub mod golden;
pub mod render;
pub mod run;
pub mod verify;

use ltaction::Error;

/// Stable exit codes: 0 success, 1 verification failures, 2 usage errors
/// (from clap), 3 expression syntax, 4 domain violations, 5 precision
/// budget, 6 enumeration ceiling, 7 internal inconsistency.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Syntax(_) => 3,
        Error::NotPrime(_)
        | Error::ZeroPrecision
        | Error::ZeroResidueDegree
        | Error::ParameterOverflow
        | Error::NonUnit
        | Error::EvenResidueDegree { .. }
        | Error::QMustEqualP { .. }
        | Error::NonzeroConstantTerm
        | Error::NonUnitConstantTerm => 4,
        Error::PrecisionBudget { .. } => 5,
        Error::TreeCeiling { .. } => 6,
        Error::IntegralityViolation { .. } | Error::Internal(_) => 7,
    }
}

/// Enumeration ceiling, overridable through `LTACTION_TREE_CEILING`.
pub fn tree_ceiling() -> u64 {
    std::env::var("LTACTION_TREE_CEILING")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(ltaction::trees::DEFAULT_TREE_CEILING)
}
