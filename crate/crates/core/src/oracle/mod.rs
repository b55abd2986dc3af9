//! Independent verification path. Everything here works on explicit
//! polynomials and the whole symmetric group; nothing consults the
//! contributing-set filter or the closed-form product.

mod operator;
mod polynomial;
pub mod random;
mod verify;
mod wronskian;

pub use operator::{
    alternating_composition, apply_weighted_operator, brute_force_const, monomial_weights,
    WeightedOperator, ORACLE_SOFT_LIMIT,
};
pub use polynomial::Polynomial;
pub use verify::{verify_theorem, Extracted, Verification};
pub use wronskian::{symbolic_wronskian, WRONSKIAN_CAP};
