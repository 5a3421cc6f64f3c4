//! Finite-scale proxies for finite-state dimension and strong dimension.
//!
//! Neither limit can be read off a finite prefix. The reported `liminf` and
//! `limsup` proxies are the minimum and maximum of `D^k(S↾n)/n` over the
//! upper half of the grid.

use serde::Serialize;

use crate::bits::BitString;

use super::engine::{Engine, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionRow {
    pub k: usize,
    pub n: usize,
    pub dk: Value,
    /// `None` for `n = 0` or an infinite value.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionSummary {
    pub k: usize,
    pub liminf_proxy: Option<f64>,
    pub limsup_proxy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    pub sequence: String,
    pub rows: Vec<DimensionRow>,
    pub summary: Vec<DimensionSummary>,
}

pub fn dimension_estimate(engine: &Engine, sequence: &str, prefix: &BitString, ks: &[usize], grid: &[usize]) -> DimensionReport {
    let grid: Vec<usize> = grid.iter().copied().filter(|&n| n <= prefix.len()).collect();
    let prefixes: Vec<BitString> = grid.iter().map(|&n| prefix.prefix(n)).collect();
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let table = engine.table(&prefixes, kmax);
    let tail_from = grid.len() / 2;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &k in ks {
        let mut lo: Option<f64> = None;
        let mut hi: Option<f64> = None;
        for (i, x) in prefixes.iter().enumerate() {
            let dk = table.value(k, x);
            let ratio = dk.finite().filter(|_| !x.is_empty()).map(|d| d as f64 / x.len() as f64);
            if let (Some(r), true) = (ratio, i >= tail_from) {
                lo = Some(lo.map_or(r, |v| v.min(r)));
                hi = Some(hi.map_or(r, |v| v.max(r)));
            }
            rows.push(DimensionRow { k, n: x.len(), dk, ratio });
        }
        summary.push(DimensionSummary { k, liminf_proxy: lo, limsup_proxy: hi });
    }
    DimensionReport { sequence: sequence.to_string(), rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_grid() {
        let engine = Engine::new(None, 1);
        let r = dimension_estimate(&engine, "zeros", &BitString::zeros(4), &[10], &[1]);
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].ratio.unwrap() >= 0.0);
        let r = dimension_estimate(&engine, "zeros", &BitString::zeros(4), &[2], &[1]);
        assert_eq!(r.rows[0].dk, Value::Infinite);
        assert_eq!(r.rows[0].ratio, None);
    }
}
