//! Finite-state transducers over `{0,1}`: representation, encoding,
//! enumeration, losslessness, inversion and the constructions built on them.

pub mod codec;
pub mod construct;
pub mod enumerate;
pub mod invert;
pub mod library;
pub mod lossless;
mod machine;
pub mod stream;
pub mod text;

use thiserror::Error;

pub use machine::{Fst, Run, State};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FstError {
    #[error("machine has no states")]
    NoStates,
    #[error("{transitions} transition rows but {outputs} output rows")]
    TableMismatch { transitions: usize, outputs: usize },
    #[error("state {state} points to {target}, but there are only {count} states")]
    StateOutOfRange { state: State, target: State, count: usize },
    #[error("only {reachable} of {count} states are reachable from state 0")]
    Unreachable { reachable: usize, count: usize },
    #[error("states are not numbered in breadth-first order")]
    NotBfsOrdered,
    #[error("encoding truncated at bit {at}")]
    Truncated { at: usize },
    #[error("{extra} bits left after the last state")]
    TrailingBits { extra: usize },
    #[error("malformed encoding: {0}")]
    Malformed(&'static str),
    #[error("encoding version {found}, expected {expected}")]
    VersionMismatch { found: u8, expected: u8 },
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("machine is not information lossless")]
    NotLossless,
    #[error("machine is lossless only of infinite order, so no inverse has bounded lag")]
    InfiniteOrder,
    #[error("inverse exceeds {limit} states")]
    InverseTooLarge { limit: usize },
    #[error("trailer of {len} bits exceeds the inversion lag {lag}")]
    TrailerTooLong { len: usize, lag: usize },
    #[error("a transducer cannot append a {len}-bit trailer after its input ends")]
    TrailerUnrealizable { len: usize },
}
