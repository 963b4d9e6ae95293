//! Exact counting of definable sets in the pure set and in vector spaces
//! over a prime field.
//!
//! For a formula `phi(x; a)` the engine produces an integer polynomial
//! `P(q)` with `|phi(M^n; a)| = P(|M|)` in every model of size above an
//! explicit threshold, together with the Morley rank and degree read off
//! from `P`.

pub mod error;
pub mod analyses;
pub mod engine;
pub mod formula;
pub mod oracle;
pub mod poly;
pub mod theory;

pub use error::{Error, Result};
pub use poly::IntPolynomial;
pub use num_bigint::BigInt;

/// Resource limits. Every entry point that can blow up checks one of these
/// and fails with [`Error::CapExceeded`] or [`Error::BudgetExceeded`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Cells produced by decomposition.
    pub cell_cap: usize,
    /// Parameters accepted when enumerating pure-set patterns.
    pub max_pure_params: usize,
    /// Largest `p^m` accepted when enumerating vector-space patterns.
    pub max_vs_pattern_space: usize,
    /// Disequations in one vector-space cell.
    pub max_disequations: usize,
    /// Largest fiber size tried by the correspondence check.
    pub max_counting_k: usize,
    /// Formula evaluations allowed to the brute-force oracle.
    pub brute_budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            cell_cap: 100_000,
            max_pure_params: 8,
            max_vs_pattern_space: 256,
            max_disequations: 20,
            max_counting_k: 16,
            brute_budget: 10_000_000,
        }
    }
}
