//! Exhaustive enumeration of `FST^{≤k}`.
//!
//! Machines are generated structurally (canonical transition tables times
//! output assignments with a fixed bit cost) rather than by decoding every
//! bit string, and are yielded in nondecreasing size, ties broken by the
//! encoding read as a bit string. The order does not depend on how many
//! workers later consume it.

use crate::bits::BitString;

use super::codec::{encode, record_size, skeleton_size};
use super::Fst;

/// Size of the smallest encodable machine (one state, empty output).
pub const MIN_MACHINE_SIZE: usize = 3;

/// Upper bound on a single output label of any machine of at most `k` bits.
pub fn max_output_within(k: usize) -> usize {
    k.saturating_sub(skeleton_size(1) + 1)
}

/// Every canonical next-state table with `n` states.
///
/// States are processed in index order; each transition goes to an already
/// discovered state or discovers the next one. A table is kept only if every
/// state has been discovered by the time it is processed.
pub fn canonical_tables(n: usize) -> Vec<Vec<[usize; 2]>> {
    fn go(
        n: usize,
        slot: usize,
        discovered: usize,
        table: &mut Vec<[usize; 2]>,
        acc: &mut Vec<Vec<[usize; 2]>>,
    ) {
        if slot == 2 * n {
            if discovered == n {
                acc.push(table.clone());
            }
            return;
        }
        let q = slot / 2;
        if q >= discovered {
            return;
        }
        let limit = if discovered < n { discovered + 1 } else { discovered };
        for t in 0..limit {
            table[q][slot % 2] = t;
            let d = if t == discovered { discovered + 1 } else { discovered };
            go(n, slot + 1, d, table, acc);
        }
    }
    let mut acc = Vec::new();
    let mut table = vec![[0; 2]; n];
    go(n, 0, 1, &mut table, &mut acc);
    acc
}

/// Per-state output assignment grouped by its cost in bits.
struct OutputOptions {
    by_cost: Vec<Vec<[BitString; 2]>>,
}

impl OutputOptions {
    fn new(max_cost: usize, lmax: Option<usize>) -> Self {
        let mut by_cost: Vec<Vec<[BitString; 2]>> = vec![Vec::new(); max_cost + 1];
        let max_len = (0..)
            .take_while(|&l| record_size(l) <= max_cost)
            .last()
            .unwrap_or(0);
        let max_len = lmax.map_or(max_len, |l| l.min(max_len));
        let strings: Vec<Vec<BitString>> =
            (0..=max_len).map(|l| BitString::all_of_length(l).collect()).collect();
        for l in 0..=max_len {
            let c = record_size(l);
            if c <= max_cost {
                for w in &strings[l] {
                    by_cost[c].push([w.clone(), w.clone()]);
                }
            }
        }
        for l0 in 0..=max_len {
            for l1 in 0..=max_len {
                let c = record_size(l0) + record_size(l1);
                if c > max_cost {
                    continue;
                }
                for w0 in &strings[l0] {
                    for w1 in &strings[l1] {
                        if w0 != w1 {
                            by_cost[c].push([w0.clone(), w1.clone()]);
                        }
                    }
                }
            }
        }
        Self { by_cost }
    }
}

/// All canonical machines whose encoding has exactly `size` bits, sorted by
/// encoding.
pub fn machines_of_size(size: usize, lmax: Option<usize>) -> Vec<Fst> {
    let mut found: Vec<(BitString, Fst)> = Vec::new();
    let mut n = 1;
    loop {
        let skel = skeleton_size(n);
        if skel + n > size {
            break;
        }
        let budget = size - skel;
        let opts = OutputOptions::new(budget, lmax);
        let tables = canonical_tables(n);
        let mut chosen: Vec<&[BitString; 2]> = Vec::with_capacity(n);
        let mut emit = |outs: &[&[BitString; 2]]| {
            for table in &tables {
                let m = Fst::from_parts_unchecked(
                    table.clone(),
                    outs.iter().map(|o| (*o).clone()).collect(),
                );
                found.push((encode(&m), m));
            }
        };
        assign(&opts, n, budget, &mut chosen, &mut emit);
        n += 1;
    }
    found.sort_by(|a, b| a.0.cmp_lex(&b.0));
    found.into_iter().map(|(_, m)| m).collect()
}

fn assign<'a>(
    opts: &'a OutputOptions,
    n: usize,
    remaining: usize,
    chosen: &mut Vec<&'a [BitString; 2]>,
    emit: &mut impl FnMut(&[&[BitString; 2]]),
) {
    let left = n - chosen.len();
    if left == 0 {
        if remaining == 0 {
            emit(chosen);
        }
        return;
    }
    let lo = if left == 1 { remaining } else { 1 };
    let hi = remaining.saturating_sub(left - 1);
    for cost in lo..=hi {
        for o in opts.by_cost.get(cost).into_iter().flatten() {
            chosen.push(o);
            assign(opts, n, remaining - cost, chosen, emit);
            chosen.pop();
        }
    }
}

/// `FST^{≤k}` (restricted to output labels of length at most `lmax`), in
/// canonical order. Empty when `k < MIN_MACHINE_SIZE`.
pub fn enumerate_machines(k: usize, lmax: Option<usize>) -> impl Iterator<Item = Fst> {
    (MIN_MACHINE_SIZE..=k).flat_map(move |s| machines_of_size(s, lmax))
}

/// The share of the enumeration assigned to `worker` out of `workers`,
/// by global index modulo the worker count.
pub fn enumerate_partition(
    k: usize,
    lmax: Option<usize>,
    worker: usize,
    workers: usize,
) -> impl Iterator<Item = Fst> {
    assert!(workers > 0 && worker < workers);
    enumerate_machines(k, lmax)
        .enumerate()
        .filter(move |(i, _)| i % workers == worker)
        .map(|(_, m)| m)
}

/// `|FST^{≤k}|` without materialising the machines.
pub fn count_machines(k: usize, lmax: Option<usize>) -> u64 {
    let mut total = 0u64;
    let mut n = 1;
    loop {
        let skel = skeleton_size(n);
        if skel + n > k {
            break;
        }
        let budget = k - skel;
        let opts = OutputOptions::counts_only(budget, lmax);
        // ways[c] = number of assignments to the states so far costing exactly c
        let mut ways = vec![0u64; budget + 1];
        ways[0] = 1;
        for _ in 0..n {
            let mut next = vec![0u64; budget + 1];
            for (c0, &w0) in ways.iter().enumerate() {
                if w0 == 0 {
                    continue;
                }
                for (c1, &w1) in opts.iter().enumerate() {
                    if c0 + c1 <= budget && w1 > 0 {
                        next[c0 + c1] = next[c0 + c1].saturating_add(w0.saturating_mul(w1));
                    }
                }
            }
            ways = next;
        }
        let assignments: u64 = ways.iter().fold(0u64, |a, &w| a.saturating_add(w));
        total = total.saturating_add(assignments.saturating_mul(canonical_tables(n).len() as u64));
        n += 1;
    }
    total
}

impl OutputOptions {
    /// Option counts per cost, without building the strings.
    fn counts_only(max_cost: usize, lmax: Option<usize>) -> Vec<u64> {
        let mut counts = vec![0u64; max_cost + 1];
        let max_len = (0..)
            .take_while(|&l| record_size(l) <= max_cost)
            .last()
            .unwrap_or(0);
        let max_len = lmax.map_or(max_len, |l| l.min(max_len));
        for l in 0..=max_len {
            let c = record_size(l);
            if c <= max_cost {
                counts[c] += 1u64 << l;
            }
        }
        for l0 in 0..=max_len {
            for l1 in 0..=max_len {
                let c = record_size(l0) + record_size(l1);
                if c <= max_cost {
                    let pairs = (1u64 << l0) * (1u64 << l1) - if l0 == l1 { 1u64 << l0 } else { 0 };
                    counts[c] += pairs;
                }
            }
        }
        counts
    }
}
