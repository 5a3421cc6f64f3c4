//! Complexity of concatenations.
//!
//! Lower bound: `D^l(xy) ≥ D^l(x) + D^l(y) − 2^l`.
//! Upper bound: `D^{l+c}(xy) ≤ 2|x| + D^l(y) + 2`, where `c` is the growth
//! in size caused by [`prepend_literal`].

use serde::Serialize;

use crate::bits::BitString;
use crate::fst::codec::decode;
use crate::fst::construct::{literal_program, prepend_literal};
use crate::fst::enumerate::MIN_MACHINE_SIZE;

use super::engine::{ComplexityTable, Engine, Value};

/// `max |prepend_literal(A)| − |A|` over machines of at most `l` bits.
pub fn prepend_overhead(engine: &Engine, l: usize) -> usize {
    (MIN_MACHINE_SIZE..=l)
        .flat_map(|s| engine.machines(s).iter().map(|a| prepend_literal(a).size() - a.size()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

/// How the upper-bound side was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// Exact `D^{l+c}`.
    Exact,
    /// Exact `D^b` for a smaller budget `b`, which can only be larger.
    Capped,
    /// Replay of the prepended machine on `double(x)·01·p`.
    Witness,
    /// Nothing at or below the right-hand side could be shown.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcatCheck {
    pub l: usize,
    pub c: usize,
    pub x: BitString,
    pub y: BitString,
    pub dl_xy: Value,
    pub dl_x: Value,
    pub dl_y: Value,
    /// `D^l(x) + D^l(y) − 2^l`, `None` when infinite.
    pub lower_rhs: Option<i128>,
    pub lower_holds: bool,
    /// `D^l(xy) − lower_rhs` when both are finite.
    pub lower_margin: Option<i128>,
    /// `2|x| + D^l(y) + 2`.
    pub upper_rhs: Value,
    /// Best upper bound shown for `D^{l+c}(xy)`.
    pub upper_lhs: Value,
    pub upper_method: BoundMethod,
    pub upper_holds: bool,
}

/// Checks both inequalities for one `(x, y)`. `table` must hold `x`, `y`
/// and `xy` up to budget `max(l, min(l + c, cap))`.
pub fn concat_bound_check(
    engine: &Engine,
    table: &ComplexityTable,
    l: usize,
    c: usize,
    cap: usize,
    x: &BitString,
    y: &BitString,
) -> ConcatCheck {
    let xy = x.concat(y);
    let dl_xy = table.value(l, &xy);
    let dl_x = table.value(l, x);
    let dl_y = table.value(l, y);

    let pow = if l >= 126 { i128::MAX } else { 1i128 << l };
    let lower_rhs = match (dl_x, dl_y) {
        (Value::Finite(a), Value::Finite(b)) => Some(a as i128 + b as i128 - pow),
        _ => None,
    };
    let (lower_holds, lower_margin) = match (dl_xy, lower_rhs) {
        (Value::Finite(a), Some(r)) => (a as i128 >= r, Some(a as i128 - r)),
        (Value::Infinite, _) => (true, None),
        (Value::Finite(_), None) => (false, None),
    };

    let upper_rhs = dl_y.plus(2 * x.len() + 2);
    let budget = l + c;
    let mut upper_lhs = Value::Infinite;
    let mut upper_method = BoundMethod::None;
    let capped = budget.min(cap).min(table.kmax());
    if capped >= l {
        upper_lhs = table.value(capped, &xy);
        upper_method = if capped == budget { BoundMethod::Exact } else { BoundMethod::Capped };
    }
    if upper_method != BoundMethod::Exact && upper_lhs > upper_rhs {
        if let Some(w) = table.complexity(engine, l, y).witness {
            let a = decode(&w.machine).expect("table witnesses decode");
            let a2 = prepend_literal(&a);
            let prog = literal_program(x, &w.program);
            if a2.size() <= budget && a2.apply(&prog) == xy && Value::Finite(prog.len()) < upper_lhs {
                upper_lhs = Value::Finite(prog.len());
                upper_method = BoundMethod::Witness;
            }
        }
    }
    let upper_holds = upper_rhs == Value::Infinite || upper_lhs <= upper_rhs;
    ConcatCheck {
        l,
        c,
        x: x.clone(),
        y: y.clone(),
        dl_xy,
        dl_x,
        dl_y,
        lower_rhs,
        lower_holds,
        lower_margin,
        upper_rhs,
        upper_lhs,
        upper_method,
        upper_holds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcatSweep {
    pub ls: Vec<usize>,
    pub overhead: Vec<(usize, usize)>,
    pub cap: usize,
    pub max_len: usize,
    pub checks: usize,
    pub lower_violations: Vec<ConcatCheck>,
    pub upper_violations: Vec<ConcatCheck>,
    /// Smallest `D^l(xy) − (D^l(x) + D^l(y) − 2^l)` seen.
    pub min_lower_margin: Option<i128>,
}

/// All `x, y` with `|x|, |y| ≤ max_len`, for each `l`.
pub fn concat_sweep(engine: &Engine, ls: &[usize], max_len: usize, cap: usize) -> ConcatSweep {
    let strings: Vec<BitString> = BitString::all_up_to(max_len).collect();
    let targets: Vec<BitString> = BitString::all_up_to(2 * max_len).collect();
    let overhead: Vec<(usize, usize)> = ls.iter().map(|&l| (l, prepend_overhead(engine, l))).collect();
    let kmax = overhead.iter().map(|&(l, c)| l.max((l + c).min(cap))).max().unwrap_or(0);
    let table = engine.table(&targets, kmax);
    let mut sweep = ConcatSweep {
        ls: ls.to_vec(),
        overhead: overhead.clone(),
        cap,
        max_len,
        checks: 0,
        lower_violations: Vec::new(),
        upper_violations: Vec::new(),
        min_lower_margin: None,
    };
    for &(l, c) in &overhead {
        for x in &strings {
            for y in &strings {
                let check = concat_bound_check(engine, &table, l, c, cap, x, y);
                sweep.checks += 1;
                if let Some(m) = check.lower_margin {
                    sweep.min_lower_margin = Some(sweep.min_lower_margin.map_or(m, |v| v.min(m)));
                }
                if !check.lower_holds {
                    sweep.lower_violations.push(check.clone());
                }
                if !check.upper_holds {
                    sweep.upper_violations.push(check);
                }
            }
        }
    }
    sweep
}
