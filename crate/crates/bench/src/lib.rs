//! Inputs shared by the benchmarks.

use fsdepth_core::fst::enumerate::enumerate_machines;
use fsdepth_core::toolkit::{generate, SequenceSpec};
use fsdepth_core::fs::{deepgen::ScalePack, Engine};
use fsdepth_core::{BitString, Fst};

/// Prefix of a built-in sequence.
pub fn prefix(spec: &str, n: usize) -> BitString {
    let spec: SequenceSpec = spec.parse().expect("known sequence");
    generate(&spec, n, &ScalePack::default(), &Engine::new(None, 1)).expect("generates")
}

/// Every machine of at most `k` bits.
pub fn machines(k: usize) -> Vec<Fst> {
    enumerate_machines(k, None).collect()
}
