//! Approximate inversion of information-lossless machines.
//!
//! The inverse reads `T(x)` and tracks every input consistent with what it
//! has read so far as a candidate `(state, pending input, overhang)`: the run
//! of `T` on the pending input ends in `state` and has written `overhang`
//! beyond the bits read. After each bit, the longest prefix shared by all
//! pending inputs is written out and stripped. The candidate sets reachable
//! this way are the states of the inverse machine.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::bits::BitString;

use super::lossless::{delay_bound, is_information_lossless};
use super::{Fst, FstError, State};

/// Inverse machine plus the lag `c`: `x↾(|x|−c) ⊑ T⁻¹(T(x)) ⊑ x`.
#[derive(Clone, Debug)]
pub struct Inverse {
    pub machine: Fst,
    pub lag: usize,
}

type Candidate = (State, Vec<u8>, Vec<u8>);
type CandidateSet = BTreeSet<Candidate>;

/// Limit on subset-construction states before giving up.
const MAX_INVERSE_STATES: usize = 1 << 16;

pub fn invert(m: &Fst) -> Result<Inverse, FstError> {
    if !is_information_lossless(m).is_lossless() {
        return Err(FstError::NotLossless);
    }
    if delay_bound(m).is_none() {
        return Err(FstError::InfiniteOrder);
    }
    // IL machines have no all-λ cycle, so pending inputs stay bounded
    let pending_cap = m.state_count() * m.state_count() * (m.max_output_len() + 2) + m.state_count();

    let initial = closure(m, [(0, Vec::new(), Vec::new())].into_iter().collect(), pending_cap)?;
    let (initial, emitted) = strip(initial);
    debug_assert!(emitted.is_empty());

    let mut index: HashMap<CandidateSet, usize> = HashMap::new();
    let mut sets: Vec<CandidateSet> = Vec::new();
    let mut next: Vec<[usize; 2]> = Vec::new();
    let mut out: Vec<[BitString; 2]> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(initial.clone(), 0);
    sets.push(initial);
    queue.push_back(0);
    let mut lag = 0;

    while let Some(id) = queue.pop_front() {
        let set = sets[id].clone();
        lag = lag.max(set.iter().map(|(_, u, _)| u.len()).max().unwrap_or(0));
        let mut row_next = [0; 2];
        let mut row_out: [BitString; 2] = Default::default();
        for b in 0..2u8 {
            let stepped = closure(m, step(m, &set, b), pending_cap)?;
            let (stripped, emitted) = strip(stepped);
            let target = match index.get(&stripped) {
                Some(&t) => t,
                None => {
                    if sets.len() >= MAX_INVERSE_STATES {
                        return Err(FstError::InverseTooLarge { limit: MAX_INVERSE_STATES });
                    }
                    let t = sets.len();
                    index.insert(stripped.clone(), t);
                    sets.push(stripped);
                    queue.push_back(t);
                    t
                }
            };
            row_next[b as usize] = target;
            row_out[b as usize] = emitted;
        }
        next.push(row_next);
        out.push(row_out);
    }
    Ok(Inverse { machine: Fst::build(next, out)?, lag })
}

fn step(m: &Fst, set: &CandidateSet, b: u8) -> CandidateSet {
    let mut result = CandidateSet::new();
    for (q, u, o) in set {
        if let Some((&first, rest)) = o.split_first() {
            if first == b {
                result.insert((*q, u.clone(), rest.to_vec()));
            }
            continue;
        }
        for a in 0..2u8 {
            let w = m.output(*q, a).as_slice();
            if let Some((&first, rest)) = w.split_first() {
                if first == b {
                    let mut u2 = u.clone();
                    u2.push(a);
                    result.insert((m.next_state(*q, a), u2, rest.to_vec()));
                }
            }
        }
    }
    result
}

/// Adds every continuation of an exact candidate along λ-output transitions.
fn closure(m: &Fst, mut set: CandidateSet, cap: usize) -> Result<CandidateSet, FstError> {
    let mut work: Vec<Candidate> = set.iter().filter(|c| c.2.is_empty()).cloned().collect();
    while let Some((q, u, _)) = work.pop() {
        for a in 0..2u8 {
            if m.output(q, a).is_empty() {
                let mut u2 = u.clone();
                u2.push(a);
                if u2.len() > cap {
                    return Err(FstError::NotLossless);
                }
                let c = (m.next_state(q, a), u2, Vec::new());
                if set.insert(c.clone()) {
                    work.push(c);
                }
            }
        }
    }
    Ok(set)
}

/// Removes the longest common prefix of all pending inputs and returns it.
fn strip(set: CandidateSet) -> (CandidateSet, BitString) {
    let Some(first) = set.iter().next() else {
        return (set, BitString::new());
    };
    let mut common = first.1.len();
    for (_, u, _) in &set {
        common = common.min(u.len());
        common = (0..common).find(|&i| u[i] != first.1[i]).unwrap_or(common);
    }
    if common == 0 {
        return (set, BitString::new());
    }
    let emitted = BitString::from(&first.1[..common]);
    let stripped = set
        .into_iter()
        .map(|(q, u, o)| (q, u[common..].to_vec(), o))
        .collect();
    (stripped, emitted)
}
