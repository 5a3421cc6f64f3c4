pub mod bits;
pub mod fs;
pub mod fst;
pub mod pt;
pub mod toolkit;

pub use bits::{bits, BitString};
pub use fst::{Fst, FstError, State};
