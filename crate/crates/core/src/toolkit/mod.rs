//! Plumbing shared by the command line: inputs, run configuration, reports.

pub mod config;
pub mod files;
pub mod report;
pub mod sequence;

pub use config::{parse_grid, Format, RunConfig};
pub use report::Report;
pub use sequence::{generate, SequenceSpec};

use crate::fs::FsError;
use crate::fst::FstError;

#[derive(Debug, thiserror::Error)]
pub enum ToolkitError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("budget {k} enumerates about {estimate} machines, above the ceiling of {ceiling}")]
    Budget { k: usize, estimate: u64, ceiling: u64 },
    #[error("{0}")]
    Contract(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ToolkitError {
    /// 1 usage, 2 input, 3 budget, 4 contract violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolkitError::Usage(_) => 1,
            ToolkitError::Input(_) | ToolkitError::Io(_) => 2,
            ToolkitError::Budget { .. } => 3,
            ToolkitError::Contract(_) => 4,
        }
    }
}

impl From<FstError> for ToolkitError {
    fn from(e: FstError) -> Self {
        match e {
            FstError::NotLossless | FstError::InfiniteOrder | FstError::InverseTooLarge { .. } => {
                ToolkitError::Contract(e.to_string())
            }
            _ => ToolkitError::Input(e.to_string()),
        }
    }
}

impl From<FsError> for ToolkitError {
    fn from(e: FsError) -> Self {
        match e {
            FsError::Fst(e) => e.into(),
            FsError::Invalid(m) => ToolkitError::Usage(m),
            other => ToolkitError::Contract(other.to_string()),
        }
    }
}
