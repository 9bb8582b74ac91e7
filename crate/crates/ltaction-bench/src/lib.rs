//! Shared fixtures for the benchmark targets.

use ltaction::{ActionEngine, GroupElem, WittElem};

/// The golden p = 2 workload: α_0 = 1 + 2ζ_3 acting mod (2^64, u_1^73).
pub fn p2_fixture() -> (ActionEngine, GroupElem) {
    let engine = ActionEngine::new(2, 1, 64, 73).expect("parameters are valid");
    let alpha0 = engine.parse("1+2*z").unwrap();
    let g = GroupElem::from_witt_unit(alpha0).unwrap();
    (engine, g)
}

/// A generic element with α_1 ≠ 0 at q = 3, mod (3^20, u_1^40).
pub fn q3_fixture() -> (ActionEngine, GroupElem) {
    let engine = ActionEngine::new(3, 1, 20, 40).expect("parameters are valid");
    let alpha0 = engine.parse("1+3*z").unwrap();
    let alpha1 = engine.parse("2+z").unwrap();
    let g = GroupElem::new(alpha0, alpha1).unwrap();
    (engine, g)
}

pub fn witt_operands() -> (WittElem, WittElem) {
    let params = ltaction::WittParams::new(3, 1, 120).unwrap();
    let a = ltaction::witt::parse_elem("12345678901234567+987654321*z", &params).unwrap();
    let b = ltaction::witt::parse_elem("5+444444444444444444*z", &params).unwrap();
    (a, b)
}
