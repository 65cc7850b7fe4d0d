//! Decision procedures on presentations: coset enumeration and exhaustive
//! homomorphism search into finite permutation groups.

mod coset;
mod homs;

use thiserror::Error;

pub use coset::{
    enumerate, todd_coxeter, CosetTable, EnumerationStats, Strategy, DEFAULT_MAX_COSETS,
};
pub use homs::{
    find_homomorphisms, find_homomorphisms_with_budget, prove_nontrivial, Certificate,
    Homomorphism, DEFAULT_CANDIDATE_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("coset enumeration exhausted {max_cosets} cosets (inconclusive)")]
    Exhausted {
        max_cosets: usize,
        stats: EnumerationStats,
    },
    #[error("{candidates} candidate assignments exceed the budget of {budget}")]
    TargetTooLarge { candidates: u128, budget: u128 },
    #[error("word uses generator {0} which is not in the presentation")]
    UnknownGenerator(String),
}
