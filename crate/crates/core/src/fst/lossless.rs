//! Information-losslessness testing.
//!
//! `T` is IL when `x ↦ (T(x), δ̂(x))` is one-to-one. A collision is a pair of
//! runs that leave some reachable state `s` on different bits and later meet
//! in one state having written the same output. The search walks the pair
//! of runs together over configurations `(state_a, state_b, leader,
//! overhang)`, where the overhang is the output the leading run has written
//! beyond the other. The lagging run is always the one extended (either run
//! when they are level), so the overhang never exceeds one output label.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::bits::BitString;

use super::{Fst, State};

/// Two distinct inputs with the same output and final state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IlWitness {
    pub input_a: BitString,
    pub input_b: BitString,
    pub shared_output: BitString,
    pub shared_final_state: State,
}

impl IlWitness {
    /// Checks the witness against the machine.
    pub fn validate(&self, m: &Fst) -> bool {
        let a = m.run(&self.input_a);
        let b = m.run(&self.input_b);
        self.input_a != self.input_b
            && a.output == self.shared_output
            && b.output == self.shared_output
            && a.final_state == self.shared_final_state
            && b.final_state == self.shared_final_state
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum IlVerdict {
    Yes,
    No(IlWitness),
}

impl IlVerdict {
    pub fn is_lossless(&self) -> bool {
        matches!(self, IlVerdict::Yes)
    }
}

/// Overhang bound `B = state_count² · (L + 1)`.
pub fn overhang_bound(m: &Fst) -> usize {
    let n = m.state_count();
    n * n * (m.max_output_len() + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Leader {
    Level,
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Config {
    a: State,
    b: State,
    leader: Leader,
    overhang: Vec<u8>,
}

#[derive(Clone, Copy)]
enum Step {
    /// Divergence from state `s`: run A reads 0, run B reads 1.
    Start(State),
    /// `(parent, run extended, bit)`; `true` means run A.
    Extend(usize, bool, u8),
}

/// Configurations right after two runs leave `s` on different bits.
fn starts(m: &Fst) -> Vec<(Config, State)> {
    (0..m.state_count())
        .filter_map(|s| {
            let (leader, overhang) = align(m.output(s, 0).as_slice(), m.output(s, 1).as_slice())?;
            Some((Config { a: m.next_state(s, 0), b: m.next_state(s, 1), leader, overhang }, s))
        })
        .collect()
}

/// Extensions of the lagging run that keep the outputs consistent.
fn successors(m: &Fst, cfg: &Config) -> Vec<(Config, bool, u8)> {
    let movers: &[bool] = match cfg.leader {
        Leader::Level => &[true, false],
        Leader::A => &[false],
        Leader::B => &[true],
    };
    let mut out = Vec::new();
    for &move_a in movers {
        for bit in 0..2u8 {
            let (from, other) = if move_a { (cfg.a, cfg.b) } else { (cfg.b, cfg.a) };
            let label = m.output(from, bit).as_slice();
            let to = m.next_state(from, bit);
            // the extended run's output against what it still owes
            let owed: &[u8] = if cfg.leader == Leader::Level { &[] } else { &cfg.overhang };
            let Some((rel, overhang)) = align(label, owed) else { continue };
            // rel: A means the extended run is now ahead
            let leader = match (rel, move_a) {
                (Leader::Level, _) => Leader::Level,
                (Leader::A, true) | (Leader::B, false) => Leader::A,
                (Leader::A, false) | (Leader::B, true) => Leader::B,
            };
            let (a, b) = if move_a { (to, other) } else { (other, to) };
            out.push((Config { a, b, leader, overhang }, move_a, bit));
        }
    }
    out
}

pub fn is_information_lossless(m: &Fst) -> IlVerdict {
    let bound = overhang_bound(m);
    let mut index: HashMap<Config, usize> = HashMap::new();
    let mut nodes: Vec<(Config, Step)> = Vec::new();
    let mut queue = VecDeque::new();

    let push = |cfg: Config,
                step: Step,
                index: &mut HashMap<Config, usize>,
                nodes: &mut Vec<(Config, Step)>,
                queue: &mut VecDeque<usize>| {
        debug_assert!(cfg.overhang.len() <= bound);
        if !index.contains_key(&cfg) {
            index.insert(cfg.clone(), nodes.len());
            queue.push_back(nodes.len());
            nodes.push((cfg, step));
        }
    };
    for (cfg, s) in starts(m) {
        push(cfg, Step::Start(s), &mut index, &mut nodes, &mut queue);
    }
    while let Some(id) = queue.pop_front() {
        let cfg = nodes[id].0.clone();
        if cfg.leader == Leader::Level && cfg.a == cfg.b {
            return IlVerdict::No(reconstruct(m, &nodes, id));
        }
        for (next, move_a, bit) in successors(m, &cfg) {
            push(next, Step::Extend(id, move_a, bit), &mut index, &mut nodes, &mut queue);
        }
    }
    IlVerdict::Yes
}

/// For an IL machine, the largest number of steps two diverging runs can
/// stay output-consistent, or `None` when they can do so forever (lossless
/// of infinite order) or the machine is not IL. Only finite-order machines
/// have an inverse with bounded lag.
pub fn delay_bound(m: &Fst) -> Option<usize> {
    if !is_information_lossless(m).is_lossless() {
        return None;
    }
    // longest path by iterative DFS; a grey node on the stack is a cycle
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Grey,
        Done(usize),
    }
    let mut marks: HashMap<Config, Mark> = HashMap::new();
    let mut best = 0;
    for (root, _) in starts(m) {
        let mut stack: Vec<(Config, Vec<Config>, usize)> = Vec::new();
        if marks.contains_key(&root) {
            continue;
        }
        marks.insert(root.clone(), Mark::Grey);
        let kids = successors(m, &root).into_iter().map(|c| c.0).collect();
        stack.push((root, kids, 0));
        while let Some((cfg, kids, longest)) = stack.last_mut() {
            if let Some(kid) = kids.pop() {
                match marks.get(&kid) {
                    Some(Mark::Grey) => return None,
                    Some(Mark::Done(d)) => *longest = (*longest).max(d + 1),
                    None => {
                        marks.insert(kid.clone(), Mark::Grey);
                        let grand = successors(m, &kid).into_iter().map(|c| c.0).collect();
                        stack.push((kid, grand, 0));
                    }
                }
                continue;
            }
            let (cfg, longest) = (cfg.clone(), *longest);
            marks.insert(cfg, Mark::Done(longest));
            stack.pop();
            if let Some((_, _, parent)) = stack.last_mut() {
                *parent = (*parent).max(longest + 1);
            }
            best = best.max(longest + 1);
        }
    }
    Some(best)
}

/// Compares two outputs that must agree on their common length. Returns which
/// one is longer (`A` = first) and the excess.
fn align(first: &[u8], second: &[u8]) -> Option<(Leader, Vec<u8>)> {
    let common = first.len().min(second.len());
    if first[..common] != second[..common] {
        return None;
    }
    Some(match first.len().cmp(&second.len()) {
        std::cmp::Ordering::Equal => (Leader::Level, Vec::new()),
        std::cmp::Ordering::Greater => (Leader::A, first[common..].to_vec()),
        std::cmp::Ordering::Less => (Leader::B, second[common..].to_vec()),
    })
}

fn reconstruct(m: &Fst, nodes: &[(Config, Step)], goal: usize) -> IlWitness {
    let mut tail_a = Vec::new();
    let mut tail_b = Vec::new();
    let mut id = goal;
    let start = loop {
        match nodes[id].1 {
            Step::Start(s) => break s,
            Step::Extend(parent, move_a, bit) => {
                if move_a {
                    tail_a.push(bit);
                } else {
                    tail_b.push(bit);
                }
                id = parent;
            }
        }
    };
    let access = &m.access_strings()[start];
    let mut input_a = access.clone();
    input_a.push(0);
    input_a.extend_from_slice(&tail_a.iter().rev().copied().collect::<Vec<_>>());
    let mut input_b = access.clone();
    input_b.push(1);
    input_b.extend_from_slice(&tail_b.iter().rev().copied().collect::<Vec<_>>());
    let run = m.run(&input_a);
    IlWitness {
        input_a,
        input_b,
        shared_output: run.output,
        shared_final_state: run.final_state,
    }
}

/// Input length used by the exhaustive oracle: `2·n² + B`.
pub fn oracle_length(m: &Fst) -> usize {
    let n = m.state_count();
    2 * n * n + overhang_bound(m)
}

/// Exhaustive check of injectivity of `x ↦ (T(x), δ̂(x))` over all inputs of
/// length at most `max_len`.
pub fn il_oracle(m: &Fst, max_len: usize) -> IlVerdict {
    let mut seen: HashMap<(BitString, State), BitString> = HashMap::new();
    for x in BitString::all_up_to(max_len) {
        let run = m.run(&x);
        let key = (run.output.clone(), run.final_state);
        if let Some(prev) = seen.get(&key) {
            return IlVerdict::No(IlWitness {
                input_a: prev.clone(),
                input_b: x,
                shared_output: run.output,
                shared_final_state: run.final_state,
            });
        }
        seen.insert(key, x);
    }
    IlVerdict::Yes
}
