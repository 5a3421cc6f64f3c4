//! How far an IL machine can move `D^k`.
//!
//! Forward: `D^{k+c1}(M(x)) ≤ D^k(x)`. Backward: `D^{k+c2}(x) ≤ D^k(M(x))`.
//! For each direction the sweep reports the smallest shift `c` in range with
//! no violation over the given strings and budgets, next to the size growth
//! of the machine the textbook construction would build.

use serde::Serialize;

use crate::bits::BitString;
use crate::fst::construct::{compose_after, pullback_construction};
use crate::fst::enumerate::MIN_MACHINE_SIZE;
use crate::fst::lossless::is_information_lossless;
use crate::fst::Fst;

use super::engine::{Engine, Value};
use super::FsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `D^{k+c}(M(x)) ≤ D^k(x)`.
    Forward,
    /// `D^{k+c}(x) ≤ D^k(M(x))`.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferViolation {
    pub k: usize,
    pub shift: usize,
    pub x: BitString,
    /// The side that should be smaller.
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftReport {
    pub machine: String,
    pub direction: Direction,
    pub ks: Vec<usize>,
    pub max_len: usize,
    pub max_shift: usize,
    /// Violation count for each shift `0..=max_shift`.
    pub violations_by_shift: Vec<usize>,
    /// Smallest shift with no violation, if any.
    pub shift: Option<usize>,
    /// Violations at the largest shift tried, when no shift works.
    pub residual: Vec<TransferViolation>,
    /// `max |A′| − |A|` for the construction over all `A` of at most
    /// `max(ks)` bits; `None` when the construction does not apply.
    pub construction_overhead: Option<usize>,
}

impl ShiftReport {
    pub fn holds(&self) -> bool {
        self.shift.is_some()
    }
}

/// Runs the sweep for one machine and direction.
pub fn measure_shift(
    engine: &Engine,
    name: &str,
    m: &Fst,
    direction: Direction,
    ks: &[usize],
    max_len: usize,
    max_shift: usize,
) -> Result<ShiftReport, FsError> {
    if !is_information_lossless(m).is_lossless() {
        return Err(crate::fst::FstError::NotLossless.into());
    }
    let xs: Vec<BitString> = BitString::all_up_to(max_len).collect();
    let images: Vec<BitString> = xs.iter().map(|x| m.apply(x)).collect();
    let kmax = ks.iter().copied().max().unwrap_or(0) + max_shift;
    let table = engine.table(xs.iter().chain(images.iter()), kmax);

    let mut violations_by_shift = Vec::new();
    let mut shift = None;
    let mut residual = Vec::new();
    for c in 0..=max_shift {
        let mut found = Vec::new();
        for &k in ks {
            for (x, mx) in xs.iter().zip(&images) {
                let (lhs, rhs) = match direction {
                    Direction::Forward => (table.value(k + c, mx), table.value(k, x)),
                    Direction::Backward => (table.value(k + c, x), table.value(k, mx)),
                };
                if lhs > rhs {
                    found.push(TransferViolation { k, shift: c, x: x.clone(), lhs, rhs });
                }
            }
        }
        violations_by_shift.push(found.len());
        if found.is_empty() {
            shift = Some(c);
            break;
        }
        residual = found;
    }
    if shift.is_some() {
        residual.clear();
    }
    let construction_overhead = overhead(engine, m, direction, ks.iter().copied().max().unwrap_or(0));
    Ok(ShiftReport {
        machine: name.to_string(),
        direction,
        ks: ks.to_vec(),
        max_len,
        max_shift,
        violations_by_shift,
        shift,
        residual,
        construction_overhead,
    })
}

fn overhead(engine: &Engine, m: &Fst, direction: Direction, kmax: usize) -> Option<usize> {
    let mut worst: Option<usize> = None;
    for s in MIN_MACHINE_SIZE..=kmax {
        for a in engine.machines(s).iter() {
            let built = match direction {
                Direction::Forward => compose_after(a, m),
                Direction::Backward => pullback_construction(a, m, &BitString::new()).ok()?,
            };
            let grow = built.size().saturating_sub(a.size());
            worst = Some(worst.map_or(grow, |w| w.max(grow)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fst::library;

    #[test]
    fn identity_needs_no_shift() {
        let engine = Engine::new(None, 1);
        for d in [Direction::Forward, Direction::Backward] {
            let r = measure_shift(&engine, "identity", &library::identity(), d, &[10, 11], 4, 2).unwrap();
            assert_eq!(r.shift, Some(0));
        }
    }

    #[test]
    fn rejects_lossy_machines() {
        let engine = Engine::new(None, 1);
        assert!(measure_shift(&engine, "silent", &library::silent(), Direction::Forward, &[10], 2, 1).is_err());
    }

    #[test]
    fn delay_backward_fails_on_single_bits() {
        // M("0") = λ, so D^k(M(x)) = 0 while D^{k+c}("0") ≥ 1 for every c
        let engine = Engine::new(None, 1);
        let r = measure_shift(&engine, "delay", &library::delay(), Direction::Backward, &[10], 2, 2).unwrap();
        assert_eq!(r.shift, None);
        assert!(r.residual.iter().any(|v| v.x.len() == 1 && v.rhs == Value::Finite(0)));
    }
}
