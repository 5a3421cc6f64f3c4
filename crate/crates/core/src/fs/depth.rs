//! Depth gaps `D^k(S↾n) − D^{k′}(S↾n)` over a grid.

use serde::Serialize;

use crate::bits::BitString;

use super::engine::{ComplexityTable, Engine, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRow {
    pub k: usize,
    pub kprime: usize,
    pub n: usize,
    pub dk: Value,
    pub dkprime: Value,
    /// `None` when either side is infinite.
    pub gap: Option<i64>,
    pub gap_over_n: Option<f64>,
}

/// Largest normalized gap seen for one budget pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSummary {
    pub k: usize,
    pub kprime: usize,
    pub max_gap_over_n: Option<f64>,
    /// The same maximum over the upper half of the grid, standing in for
    /// "infinitely many n".
    pub tail_max_gap_over_n: Option<f64>,
}

/// Per-`k` evidence: the best tail gap over all `k′` paired with `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetAlpha {
    pub k: usize,
    pub alpha: f64,
}

/// The two quantifier orders, evaluated on the grid.
///
/// Definition order (one `α` for every `k`): the smallest of the per-`k`
/// values. Alternative order (`α` may depend on `k`): whether each per-`k`
/// value is positive. Neither is a verdict on the infinite sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantifierReadings {
    pub per_k: Vec<BudgetAlpha>,
    pub uniform_alpha: f64,
    pub every_k_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthProfile {
    pub sequence: String,
    pub rows: Vec<DepthRow>,
    pub pairs: Vec<PairSummary>,
    pub readings: QuantifierReadings,
}

/// `D^k(x) − D^{k′}(x)`; zero when `k = k′`.
pub fn depth_gap(table: &ComplexityTable, k: usize, kprime: usize, x: &BitString) -> Option<i64> {
    table.value(k, x).diff(table.value(kprime, x))
}

/// Profile of `prefix` over `pairs × grid`. Pairs with `k ≥ k′` are skipped,
/// grid points beyond the prefix are dropped.
pub fn depth_profile(
    engine: &Engine,
    sequence: &str,
    prefix: &BitString,
    pairs: &[(usize, usize)],
    grid: &[usize],
) -> DepthProfile {
    let pairs: Vec<(usize, usize)> = pairs.iter().copied().filter(|(k, kp)| k < kp).collect();
    let grid: Vec<usize> = grid.iter().copied().filter(|&n| n <= prefix.len()).collect();
    let kmax = pairs.iter().map(|p| p.1).max().unwrap_or(0);
    let prefixes: Vec<BitString> = grid.iter().map(|&n| prefix.prefix(n)).collect();
    let table = engine.table(&prefixes, kmax);
    profile_from_table(&table, sequence, &prefixes, &pairs)
}

pub fn profile_from_table(
    table: &ComplexityTable,
    sequence: &str,
    prefixes: &[BitString],
    pairs: &[(usize, usize)],
) -> DepthProfile {
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let tail_from = prefixes.len() / 2;
    for &(k, kprime) in pairs {
        let mut max_all: Option<f64> = None;
        let mut max_tail: Option<f64> = None;
        for (i, x) in prefixes.iter().enumerate() {
            let n = x.len();
            let dk = table.value(k, x);
            let dkprime = table.value(kprime, x);
            let gap = dk.diff(dkprime);
            let gap_over_n = gap.filter(|_| n > 0).map(|g| g as f64 / n as f64);
            if let Some(r) = gap_over_n {
                max_all = Some(max_all.map_or(r, |m| m.max(r)));
                if i >= tail_from {
                    max_tail = Some(max_tail.map_or(r, |m| m.max(r)));
                }
            }
            rows.push(DepthRow { k, kprime, n, dk, dkprime, gap, gap_over_n });
        }
        summaries.push(PairSummary { k, kprime, max_gap_over_n: max_all, tail_max_gap_over_n: max_tail });
    }
    let readings = readings(&summaries);
    DepthProfile { sequence: sequence.to_string(), rows, pairs: summaries, readings }
}

fn readings(pairs: &[PairSummary]) -> QuantifierReadings {
    let mut per_k: Vec<BudgetAlpha> = Vec::new();
    for p in pairs {
        let a = p.tail_max_gap_over_n.unwrap_or(0.0);
        match per_k.iter_mut().find(|b| b.k == p.k) {
            Some(b) => b.alpha = b.alpha.max(a),
            None => per_k.push(BudgetAlpha { k: p.k, alpha: a }),
        }
    }
    per_k.sort_by_key(|b| b.k);
    let uniform_alpha = per_k.iter().map(|b| b.alpha).fold(f64::INFINITY, f64::min);
    let uniform_alpha = if per_k.is_empty() { 0.0 } else { uniform_alpha };
    let every_k_positive = !per_k.is_empty() && per_k.iter().all(|b| b.alpha > 0.0);
    QuantifierReadings { per_k, uniform_alpha, every_k_positive }
}
