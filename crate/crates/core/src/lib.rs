//! Exact computation of the universal constants `const(p)` that relate the
//! alternated composition of `N = 2p` weighted order-`p` differential
//! operators to the Wronskian of their weights.
//!
//! The fast path enumerates the contributing permutation set with pruned
//! backtracking ([`backtrack`]) and sums a falling-factorial product per
//! permutation ([`coefficient`]), optionally split across threads
//! ([`parallel`]). The [`oracle`] module recomputes everything the slow way,
//! by literally composing polynomial differential operators over the whole
//! symmetric group.

pub mod backtrack;
pub mod coefficient;
pub mod error;
pub mod oracle;
pub mod parallel;
pub mod permutation;
pub mod report;

pub use backtrack::{enumerate_backtracking, Backtracking, SuffixState};
pub use coefficient::{
    const_of_p, const_of_p_with, exponent_sequence, falling_factorial, term_coefficient,
    wronskian_of_monomials, ConstReport, ExponentTrace, Term,
};
pub use error::{Error, Result};
pub use parallel::{PartialResult, RunOptions, SubtreeTask};
pub use permutation::{
    count_late_growing, enumerate_filtered, is_contributing, is_late_growing, suffix_partial_sums,
    Parity, Permutation,
};

/// Arbitrary-precision signed integer used for every exact quantity.
pub type ExactInt = num_bigint::BigInt;

/// Exact rational, used for the ratio columns and the oracle's proportionality fit.
pub type ExactRational = num_rational::BigRational;
