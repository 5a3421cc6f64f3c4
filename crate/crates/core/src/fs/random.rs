//! Search for strings that small machines cannot compress.

use serde::Serialize;

use crate::bits::BitString;

use super::engine::{Engine, Value};
use super::FsError;

/// Candidates evaluated per engine call.
const BATCH: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomString {
    pub r: BitString,
    pub k: usize,
    pub dk: Value,
    /// Least `D^k(r)` accepted: `|r| − ⌊2^{k/2}⌋`, possibly negative.
    pub threshold: i64,
    /// Candidates examined, including `r`.
    pub tried: u64,
}

/// `⌊2^{k/2}⌋`, saturating.
pub fn half_power(k: usize) -> u64 {
    if k >= 128 {
        return u64::MAX;
    }
    let full: u128 = 1u128 << k;
    let mut s = (full as f64).sqrt() as u128;
    while s * s > full {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= full {
        s += 1;
    }
    s.min(u64::MAX as u128) as u64
}

/// The randomness threshold `|r| − 2^{k/2}`, rounded up to an integer.
pub fn threshold(k: usize, length: usize) -> i64 {
    length as i64 - half_power(k).min(i64::MAX as u64) as i64
}

pub fn passes(k: usize, r: &BitString, dk: Value) -> bool {
    match dk {
        Value::Infinite => true,
        Value::Finite(d) => d as i64 >= threshold(k, r.len()),
    }
}

/// The lexicographically least `r` of the given length with
/// `D^k(r) ≥ |r| − 2^{k/2}`, trying at most `budget` candidates.
pub fn find_fs_random_string(engine: &Engine, k: usize, length: usize, budget: u64) -> Result<RandomString, FsError> {
    if length >= 64 {
        return Err(FsError::Invalid(format!("random string length {length} must be below 64")));
    }
    let limit = if length == 0 { 1 } else { 1u64 << length };
    let limit = limit.min(budget);
    let thr = threshold(k, length);
    if thr <= 0 && limit > 0 {
        let r = BitString::zeros(length);
        let dk = engine.fs_complexity(k, &r).value;
        return Ok(RandomString { r, k, dk, threshold: thr, tried: 1 });
    }
    let mut start = 0u64;
    while start < limit {
        let end = (start + BATCH).min(limit);
        let batch: Vec<BitString> = (start..end).map(|v| BitString::from_u64(v, length)).collect();
        let table = engine.table(&batch, k);
        for (i, r) in batch.iter().enumerate() {
            let dk = table.value(k, r);
            if passes(k, r, dk) {
                return Ok(RandomString { r: r.clone(), k, dk, threshold: thr, tried: start + i as u64 + 1 });
            }
        }
        start = end;
    }
    Err(FsError::BudgetExceeded { budget: budget as usize, length })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_arithmetic() {
        assert_eq!(half_power(4), 4);
        assert_eq!(threshold(4, 10), 6);
        assert_eq!(half_power(10), 32);
        assert_eq!(half_power(11), 45);
        assert_eq!(half_power(0), 1);
    }

    #[test]
    fn non_positive_threshold_returns_first_string() {
        let engine = Engine::new(None, 1);
        let found = find_fs_random_string(&engine, 10, 8, 1000).unwrap();
        assert_eq!(found.r, BitString::zeros(8));
        assert_eq!(found.tried, 1);
    }

    #[test]
    fn found_string_verifies_independently() {
        let engine = Engine::new(None, 1);
        let found = find_fs_random_string(&engine, 10, 40, 1000).unwrap();
        assert_eq!(found.threshold, 8);
        let check = engine.fs_complexity(10, &found.r);
        assert_eq!(check.value, found.dk);
        assert!(passes(10, &found.r, check.value));
        for v in 0..found.tried - 1 {
            let r = BitString::from_u64(v, 40);
            assert!(!passes(10, &r, engine.fs_complexity(10, &r).value));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let engine = Engine::new(None, 1);
        assert!(matches!(find_fs_random_string(&engine, 12, 20, 0), Err(FsError::BudgetExceeded { .. })));
    }
}
