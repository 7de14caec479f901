//! Exact computer algebra over Weyl algebras `A_m(Q)`: normal-form operator
//! arithmetic, principal symbols with respect to the filtration by derivative
//! order, left Ore common multiples, and a noncommutative Gaussian elimination
//! that produces a canonical determinant together with a replayable
//! certificate trace.
//!
//! The crate is organised bottom-up:
//!
//! * [`weyl`] — elements of `A_m(Q)` in the normal form `x^a d^b`;
//! * [`symbol`] — the commutative graded ring `Q[X, Y]` of principal symbols;
//! * [`ore`] — left common multiples `u a = v b` by bounded-degree linear
//!   algebra over `Q`;
//! * [`matrix`] — square matrices over `A_m(Q)`, elementary matrices, direct
//!   sums;
//! * [`det`] — Gaussian reduction with certificate traces and the canonical
//!   determinant `det_F`;
//! * [`explorer`] — randomised search for products of elementary matrices
//!   that land in the order-zero subring, with re-factorisation attempts;
//! * [`parser`] / [`printer`] — the ASCII surface syntax (`"x1*d1 + 1"`) and
//!   JSON matrix documents.

pub mod det;
pub mod error;
pub mod explorer;
mod linalg;
pub mod matrix;
pub mod ore;
pub mod parser;
pub mod printer;
pub mod rational;
pub mod symbol;
pub mod weyl;

pub use det::{
    check_det_one, det_f, det_f_triangular, det_f_with, gauss_reduce, gauss_reduce_with,
    is_invertible, verify_elementary_product, DetOneReport, DetResult, PivotStrategy,
    ReduceOptions, ReductionStep, ReductionTrace,
};
pub use error::{Error, Result};
pub use explorer::{conjecture_probe, random_elementary_word, ProbeConfig, ProbeReport};
pub use matrix::{cohn_matrix, ElementaryDescriptor, WeylMatrix};
pub use ore::{left_ore_pair, rational_kernel, OrePair, OreSearchConfig};
pub use parser::{parse_matrix_document, parse_weyl_expr, MatrixDocument};
pub use printer::{format_symbol, format_weyl};
pub use rational::Rational;
pub use symbol::{commutative_det, SymbolMonomial, SymbolPoly};
pub use weyl::{FiltrationDegree, WeylElement, WeylMonomial};
