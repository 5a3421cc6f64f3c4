//! Small named machines used throughout the tests and experiments.

use crate::bits::{bits, BitString};

use super::Fst;

/// Copies its input.
pub fn identity() -> Fst {
    Fst::from_parts_unchecked(vec![[0, 0]], vec![[bits("0"), bits("1")]])
}

/// `T_r`: one state writing `r` on both transitions.
pub fn constant(r: &BitString) -> Fst {
    Fst::from_parts_unchecked(vec![[0, 0]], vec![[r.clone(), r.clone()]])
}

/// Writes nothing, ever.
pub fn silent() -> Fst {
    constant(&BitString::new())
}

/// Writes every input bit twice.
pub fn doubler() -> Fst {
    Fst::from_parts_unchecked(vec![[0, 0]], vec![[bits("00"), bits("11")]])
}

/// One-bit delay: the first transition writes nothing, every later one
/// writes the previous input bit. The last bit read lives only in the state.
pub fn delay() -> Fst {
    Fst::from_parts_unchecked(
        vec![[1, 2], [1, 2], [1, 2]],
        vec![
            [BitString::new(), BitString::new()],
            [bits("0"), bits("0")],
            [bits("1"), bits("1")],
        ],
    )
}

/// Complements every bit.
pub fn complement() -> Fst {
    Fst::from_parts_unchecked(vec![[0, 0]], vec![[bits("1"), bits("0")]])
}

/// The information-lossless machines used by the complexity-transfer sweeps.
pub fn il_corpus() -> Vec<(&'static str, Fst)> {
    vec![
        ("identity", identity()),
        ("doubler", doubler()),
        ("delay", delay()),
        ("complement", complement()),
    ]
}

/// Looks up a machine by the names accepted on the command line.
pub fn by_name(name: &str) -> Option<Fst> {
    match name {
        "identity" => Some(identity()),
        "doubler" => Some(doubler()),
        "delay" => Some(delay()),
        "complement" => Some(complement()),
        "silent" => Some(silent()),
        _ => None,
    }
}
