//! Depth measured by polynomial-time oblivious predictors, at toy scale.

pub mod he;
pub mod language;
pub mod pom;
pub mod predictor;
pub mod reduction;
pub mod strings;
pub mod transport;

pub use language::{Language, LanguagePrefix};
pub use predictor::Predictor;
pub use reduction::Reduction;

use reduction::ReductionReport;

#[derive(Debug, thiserror::Error)]
pub enum PtError {
    #[error("reduction {name} is not monotone and injective on the range")]
    InvalidReduction { name: String, report: Box<ReductionReport> },
    #[error("language undecided at s_{n}")]
    Undecided { n: u64 },
    #[error("images up to s_{n_max} are too long to index")]
    TooLong { n_max: u64 },
}
