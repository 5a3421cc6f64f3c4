//! The `D^k_FS` engine.
//!
//! For a fixed machine, the shortest program for every target is found by
//! one breadth-first search over configurations `(state, trie node)`, where
//! the trie holds all targets and a configuration means "the output so far
//! spells the path to this node". Prefixes of one sequence form a single
//! path, so a whole `n` grid costs one search per machine.
//!
//! The search expands the 0-successor before the 1-successor from a FIFO
//! queue, so the first program reaching a configuration is the
//! lexicographically least among the shortest.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::fst::codec::{decode, encode};
use crate::fst::enumerate::{machines_of_size, MIN_MACHINE_SIZE};
use crate::fst::Fst;

/// A complexity value, with `Infinite` for "no machine in budget outputs it".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(usize),
    Infinite,
}

pub use Value::Infinite as INFINITE;

impl Value {
    pub fn finite(self) -> Option<usize> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }

    /// `self + n`, absorbing at infinity.
    pub fn plus(self, n: usize) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(v + n),
            Value::Infinite => Value::Infinite,
        }
    }

    pub fn add(self, other: Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }

    /// `self − other` when both are finite.
    pub fn diff(self, other: Value) -> Option<i64> {
        Some(self.finite()? as i64 - other.finite()? as i64)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => s.serialize_u64(*v as u64),
            Value::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(Value::Finite(v as usize)),
            Raw::S(s) if s == "inf" => Ok(Value::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad complexity value {s:?}"))),
        }
    }
}

impl std::str::FromStr for Value {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            Ok(Value::Infinite)
        } else {
            s.parse().map(Value::Finite)
        }
    }
}

/// A machine (by encoding) and a program for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub machine: BitString,
    pub program: BitString,
}

impl Witness {
    pub fn new(m: &Fst, program: BitString) -> Self {
        Witness { machine: encode(m), program }
    }

    /// True when the machine decodes, fits in `k` bits and prints `x`.
    pub fn replays(&self, k: usize, x: &BitString) -> bool {
        match decode(&self.machine) {
            Ok(m) => self.machine.len() <= k && m.apply(&self.program) == *x,
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityValue {
    pub value: Value,
    pub witness: Option<Witness>,
}

impl ComplexityValue {
    pub const INFINITE: ComplexityValue = ComplexityValue { value: Value::Infinite, witness: None };
}

const NONE: u32 = u32::MAX;

/// Binary trie over a set of targets.
#[derive(Clone, Debug)]
pub struct Trie {
    children: Vec<[u32; 2]>,
    /// Target id ending at each node, or `NONE`.
    terminal: Vec<u32>,
    targets: Vec<BitString>,
}

impl Trie {
    /// Builds the trie; duplicate targets share an id.
    pub fn new<'a>(targets: impl IntoIterator<Item = &'a BitString>) -> Self {
        let mut trie = Trie { children: vec![[NONE; 2]], terminal: vec![NONE], targets: Vec::new() };
        for t in targets {
            let mut node = 0usize;
            for b in t.iter() {
                let child = trie.children[node][b as usize];
                node = if child == NONE {
                    trie.children.push([NONE; 2]);
                    trie.terminal.push(NONE);
                    let id = (trie.children.len() - 1) as u32;
                    trie.children[node][b as usize] = id;
                    id as usize
                } else {
                    child as usize
                };
            }
            if trie.terminal[node] == NONE {
                trie.terminal[node] = trie.targets.len() as u32;
                trie.targets.push(t.clone());
            }
        }
        trie
    }

    pub fn targets(&self) -> &[BitString] {
        &self.targets
    }

    pub fn target_id(&self, x: &BitString) -> Option<usize> {
        let mut node = 0usize;
        for b in x.iter() {
            let c = self.children[node][b as usize];
            if c == NONE {
                return None;
            }
            node = c as usize;
        }
        let t = self.terminal[node];
        (t != NONE).then_some(t as usize)
    }

    fn node_count(&self) -> usize {
        self.children.len()
    }

    /// Node reached by reading `w` from `node`, if it stays in the trie.
    #[inline]
    fn walk(&self, mut node: u32, w: &[u8]) -> u32 {
        for &b in w {
            node = self.children[node as usize][b as usize];
            if node == NONE {
                return NONE;
            }
        }
        node
    }
}

/// Scratch space for searches, reused across machines.
#[derive(Default)]
struct Scratch {
    stamp: Vec<u32>,
    reported: Vec<u32>,
    generation: u32,
    queue: Vec<(u32, u32)>,
}

impl Scratch {
    fn reset(&mut self, size: usize, targets: usize) {
        if self.stamp.len() < size {
            self.stamp.resize(size, 0);
        }
        if self.reported.len() < targets {
            self.reported.resize(targets, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.reported.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.queue.clear();
    }
}

/// Runs the configuration search for `m`, calling `hit(target, length)` the
/// first time each target is completed.
fn search(m: &Fst, trie: &Trie, scratch: &mut Scratch, mut hit: impl FnMut(usize, usize)) {
    let nodes = trie.node_count();
    scratch.reset(m.state_count() * nodes, trie.targets.len());
    let generation = scratch.generation;
    let reported = &mut scratch.reported;
    let mut report = |t: u32, d: usize| {
        if reported[t as usize] != generation {
            reported[t as usize] = generation;
            hit(t as usize, d);
        }
    };
    scratch.stamp[0] = generation;
    scratch.queue.push((0, 0));
    if trie.terminal[0] != NONE {
        report(trie.terminal[0], 0);
    }
    let (mut head, mut depth, mut layer_end) = (0usize, 0usize, 1usize);
    while head < scratch.queue.len() {
        if head == layer_end {
            depth += 1;
            layer_end = scratch.queue.len();
        }
        let (q, node) = scratch.queue[head];
        head += 1;
        for b in 0..2u8 {
            let t = trie.walk(node, m.output(q as usize, b).as_slice());
            if t == NONE {
                continue;
            }
            let q2 = m.next_state(q as usize, b);
            let slot = q2 * nodes + t as usize;
            if scratch.stamp[slot] == generation {
                continue;
            }
            scratch.stamp[slot] = generation;
            scratch.queue.push((q2 as u32, t));
            let term = trie.terminal[t as usize];
            if term != NONE {
                report(term, depth + 1);
            }
        }
    }
}

/// The lexicographically least shortest program for `x` on `m`.
pub fn shortest_program(m: &Fst, x: &BitString) -> ComplexityValue {
    match program_for(m, x) {
        Some(p) => ComplexityValue { value: Value::Finite(p.len()), witness: Some(Witness::new(m, p)) },
        None => ComplexityValue::INFINITE,
    }
}

/// Search with parent links, for one machine and one target.
fn program_for(m: &Fst, x: &BitString) -> Option<BitString> {
    let n = x.len() + 1;
    let mut parent: Vec<Option<(usize, u8)>> = vec![None; m.state_count() * n];
    let mut seen = vec![false; m.state_count() * n];
    let mut queue = std::collections::VecDeque::from([(0usize, 0usize)]);
    seen[0] = true;
    let xs = x.as_slice();
    let finish = |mut slot: usize, parent: &[Option<(usize, u8)>]| {
        let mut prog = Vec::new();
        while let Some((p, b)) = parent[slot] {
            prog.push(b);
            slot = p;
        }
        prog.reverse();
        BitString::from(prog.as_slice())
    };
    if x.is_empty() {
        return Some(BitString::new());
    }
    while let Some((q, pos)) = queue.pop_front() {
        for b in 0..2u8 {
            let w = m.output(q, b).as_slice();
            if pos + w.len() > x.len() || xs[pos..pos + w.len()] != *w {
                continue;
            }
            let q2 = m.next_state(q, b);
            let pos2 = pos + w.len();
            let slot = q2 * n + pos2;
            if seen[slot] {
                continue;
            }
            seen[slot] = true;
            parent[slot] = Some((q * n + pos, b));
            if pos2 == x.len() {
                return Some(finish(slot, &parent));
            }
            queue.push_back((q2, pos2));
        }
    }
    None
}

/// Best `(length, machine index)` per target among machines of one size.
type SizeBest = Vec<Option<(u32, u32)>>;

/// Machines of each size, built once and shared.
#[derive(Default)]
struct Catalog {
    by_size: Mutex<HashMap<(usize, Option<usize>), Arc<Vec<Fst>>>>,
}

impl Catalog {
    fn get(&self, size: usize, lmax: Option<usize>) -> Arc<Vec<Fst>> {
        if let Some(v) = self.by_size.lock().expect("catalog lock").get(&(size, lmax)) {
            return v.clone();
        }
        let built = Arc::new(machines_of_size(size, lmax));
        self.by_size
            .lock()
            .expect("catalog lock")
            .entry((size, lmax))
            .or_insert(built)
            .clone()
    }
}

/// Computes `D^k_FS` over a fixed enumeration setting.
pub struct Engine {
    lmax: Option<usize>,
    pool: rayon::ThreadPool,
    catalog: Catalog,
}

impl Engine {
    /// `workers = 0` uses rayon's default thread count.
    pub fn new(lmax: Option<usize>, workers: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        Engine { lmax, pool, catalog: Catalog::default() }
    }

    pub fn lmax(&self) -> Option<usize> {
        self.lmax
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Machines of exactly `size` bits, in encoding order.
    pub fn machines(&self, size: usize) -> Arc<Vec<Fst>> {
        self.catalog.get(size, self.lmax)
    }

    /// Per-size best programs for every target, for all sizes up to `kmax`.
    pub fn table<'a>(&self, targets: impl IntoIterator<Item = &'a BitString>, kmax: usize) -> ComplexityTable {
        let trie = Trie::new(targets);
        let mut per_size = Vec::new();
        for size in MIN_MACHINE_SIZE..=kmax {
            let machines = self.machines(size);
            per_size.push(self.best_of(&machines, &trie));
        }
        ComplexityTable { trie, per_size, lmax: self.lmax, kmax }
    }

    fn best_of(&self, machines: &[Fst], trie: &Trie) -> SizeBest {
        let targets = trie.targets.len();
        let merge = |mut a: SizeBest, b: SizeBest| {
            for (x, y) in a.iter_mut().zip(b) {
                if let Some(y) = y {
                    if x.is_none_or(|x| y < x) {
                        *x = Some(y);
                    }
                }
            }
            a
        };
        self.pool.install(|| {
            machines
                .par_iter()
                .enumerate()
                .with_min_len(64)
                .fold(
                    || (vec![None; targets], Scratch::default()),
                    |(mut best, mut scratch), (idx, m)| {
                        search(m, trie, &mut scratch, |t, d| {
                            let cand = (d as u32, idx as u32);
                            if best[t].is_none_or(|b: (u32, u32)| cand < b) {
                                best[t] = Some(cand);
                            }
                        });
                        (best, scratch)
                    },
                )
                .map(|(best, _)| best)
                .reduce(|| vec![None; targets], merge)
        })
    }

    /// `D^k_FS(x)` with a witness.
    pub fn fs_complexity(&self, k: usize, x: &BitString) -> ComplexityValue {
        self.table([x], k).complexity(self, k, x)
    }
}

/// `D^s` restricted to machines of each exact size `s`, from which `D^k`
/// for any `k ≤ kmax` is a minimum over sizes.
pub struct ComplexityTable {
    trie: Trie,
    per_size: Vec<SizeBest>,
    lmax: Option<usize>,
    kmax: usize,
}

impl ComplexityTable {
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn lmax(&self) -> Option<usize> {
        self.lmax
    }

    pub fn targets(&self) -> &[BitString] {
        self.trie.targets()
    }

    /// Winning `(size, machine index, length)` under the tie-break order
    /// value, then size, then encoding.
    fn best(&self, k: usize, t: usize) -> Option<(usize, usize, usize)> {
        assert!(k <= self.kmax, "budget {k} beyond table limit {}", self.kmax);
        let mut best: Option<(usize, usize, usize)> = None;
        for size in MIN_MACHINE_SIZE..=k {
            if let Some((d, idx)) = self.per_size[size - MIN_MACHINE_SIZE][t] {
                let d = d as usize;
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((size, idx as usize, d));
                }
            }
        }
        best
    }

    /// `D^k(x)` without a witness. Panics if `x` is not a target.
    pub fn value(&self, k: usize, x: &BitString) -> Value {
        let t = self.trie.target_id(x).unwrap_or_else(|| panic!("{x:?} is not a table target"));
        self.value_by_id(k, t)
    }

    pub fn value_by_id(&self, k: usize, t: usize) -> Value {
        self.best(k, t).map_or(Value::Infinite, |(_, _, d)| Value::Finite(d))
    }

    /// `D^k(x)` with its witness, replaying the winning machine.
    pub fn complexity(&self, engine: &Engine, k: usize, x: &BitString) -> ComplexityValue {
        let t = self.trie.target_id(x).unwrap_or_else(|| panic!("{x:?} is not a table target"));
        match self.best(k, t) {
            None => ComplexityValue::INFINITE,
            Some((size, idx, d)) => {
                let m = &engine.machines(size)[idx];
                let program = program_for(m, x).expect("recorded machine reaches target");
                debug_assert_eq!(program.len(), d);
                ComplexityValue { value: Value::Finite(d), witness: Some(Witness::new(m, program)) }
            }
        }
    }
}
