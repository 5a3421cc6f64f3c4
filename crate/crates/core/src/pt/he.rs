//! A finite stand-in for `H_E = {⟨0^i, x⟩ : M_i accepts x}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bits::BitString;

use super::language::{Decider, Language};
use super::reduction::{unpair, Reduction};

#[derive(Clone)]
pub struct ToyMachine {
    pub index: usize,
    pub name: String,
    pub decider: Decider,
}

impl ToyMachine {
    pub fn new(index: usize, name: &str, decide: impl Fn(&BitString) -> bool + Send + Sync + 'static) -> Self {
        ToyMachine { index, name: name.to_string(), decider: Arc::new(decide) }
    }
}

/// A small table of total deciders, indexed from 1.
pub fn toy_machines() -> Vec<ToyMachine> {
    vec![
        ToyMachine::new(1, "accept-all", |_| true),
        ToyMachine::new(2, "even-weight", |x| x.count_ones() % 2 == 0),
        ToyMachine::new(3, "ends-in-one", |x| !x.is_empty() && x.bit(x.len() - 1) == 1),
        ToyMachine::new(4, "reject-all", |_| false),
    ]
}

pub struct ToyHe {
    pub language: Language,
    /// `f_i(x) = ⟨0^i, x⟩` for each machine index.
    pub reductions: Vec<(usize, Reduction)>,
}

/// Index exponent with `index(⟨0^i, s_n⟩) ≤ n^c` for every `n ≥ 2`.
pub fn pad_exponent(i: usize) -> u32 {
    2 * i as u32 + 4
}

/// Builds the language and its reductions. Strings that are not pairs, or
/// name an index outside the table, are non-members.
pub fn toy_he(machines: &[ToyMachine]) -> ToyHe {
    let table: BTreeMap<usize, Decider> = machines.iter().map(|m| (m.index, m.decider.clone())).collect();
    let reductions = machines.iter().map(|m| (m.index, Reduction::pad(m.index, pad_exponent(m.index)))).collect();
    let language = Language::from_decider("toy-H_E", move |y| match unpair(y) {
        Some((u, x)) if u.count_ones() == 0 => table.get(&u.len()).is_some_and(|d| d(&x)),
        _ => false,
    });
    ToyHe { language, reductions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::pt::reduction::{pair, validate_reduction};

    #[test]
    fn accept_all_accepts_everything() {
        let he = toy_he(&toy_machines());
        for x in BitString::all_up_to(6) {
            assert_eq!(he.language.decide(&pair(&bits("0"), &x)), Some(true));
            assert_eq!(he.language.decide(&pair(&bits("0000"), &x)), Some(false));
            assert_eq!(he.language.decide(&pair(&bits("00000"), &x)), Some(false));
            assert_eq!(he.language.decide(&pair(&bits("01"), &x)), Some(false));
        }
    }

    #[test]
    fn reductions_validate() {
        let he = toy_he(&toy_machines());
        for (i, r) in &he.reductions {
            let rep = validate_reduction(r, 2..1024);
            assert!(rep.valid, "f_{i}: {rep:?}");
        }
    }
}
