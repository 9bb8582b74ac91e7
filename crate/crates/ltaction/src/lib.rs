//! Exact arithmetic for the action of the height-2 Morava stabilizer group on
//! the Lubin-Tate deformation ring `W(F_{q^2})[[u_1]]` and its graded extension
//! `W(F_{q^2})[[u_1]][u^{±1}]`, where `q = p^f` with `F/Q_p` unramified.
//!
//! Every group element has a unique expression `α_0 + α_1·S` with `α_0` a unit
//! of the Witt ring, subject to `S^2 = p` and `ω̄·S = S·ω`. This crate computes
//! the power series `(α_0 + α_1·S).u_1` and `(α_0 + α_1·S).u` to a chosen
//! p-adic precision `p^M` and `u_1`-adic truncation `u_1^W`, by three mutually
//! cross-checking routes:
//!
//! * a recursion over the index sets `Λ` of parity-alternating sequences
//!   ([`stabilizer::ActionEngine::act_u1_recursive`]),
//! * the equivalent sum over labelled ordered rooted trees, evaluated through
//!   the same generating-function recursion and cross-checked at low weights
//!   against brute-force tree enumeration
//!   ([`stabilizer::ActionEngine::act_u1_trees`]),
//! * a degreewise solve of the fractional-linear functional equation on the
//!   Cartier coordinate `w_1`, with the coordinate-change series obtained from
//!   stabilized 2x2 matrix partial products
//!   ([`stabilizer::ActionEngine::act_u1_functional`]).
//!
//! All arithmetic is exact fixed-point: residues mod `p^N` with `N = M + W`,
//! plus an explicit power-of-p denominator exponent on series coefficients.
//! A runtime monitor rejects any computation whose denominators would exceed
//! the `N − M` budget instead of silently losing precision.

pub mod error;
pub mod lambda;
pub mod series;
pub mod stabilizer;
pub mod trees;
pub mod witt;

mod conway;

pub use error::Error;
pub use lambda::{IntComposition, LambdaSeq, LenParity};
pub use series::{ScaledSeries, Series2x2, SeriesRecord};
pub use stabilizer::{ActionEngine, ActionResult, GroupElem, Linearity, Method, Target};
pub use trees::{LabelledTree, TreeEnumerator};
pub use witt::{ScaledWitt, WittElem, WittParams};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
