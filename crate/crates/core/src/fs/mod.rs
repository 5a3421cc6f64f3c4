//! Finite-state decompression complexity and the experiments built on it.

pub mod cache;
pub mod concat;
pub mod deepgen;
pub mod depth;
pub mod dimension;
pub mod engine;
pub mod random;
pub mod sgl;
pub mod transfer;

use thiserror::Error;

pub use engine::{ComplexityTable, ComplexityValue, Engine, Value, Witness};

#[derive(Debug, Error)]
pub enum FsError {
    #[error("search budget of {budget} candidates exhausted at length {length}")]
    BudgetExceeded { budget: usize, length: usize },
    #[error("no string length gives a constant machine within {kprime} bits")]
    InfeasibleStage { kprime: usize },
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Fst(#[from] crate::fst::FstError),
}
