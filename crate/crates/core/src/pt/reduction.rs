//! Monotone, length-bounded many-one reductions on `{0,1}*`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::BitString;

use super::strings::{index_of, string_at};

pub type StringMap = Arc<dyn Fn(&BitString) -> BitString + Send + Sync>;

/// `|f(x)| ≤ slope · |x| + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LengthBound {
    pub slope: f64,
    pub offset: usize,
}

#[derive(Clone)]
pub struct Reduction {
    name: String,
    f: StringMap,
    /// Index bound `m_n ≤ n^c`.
    pub c: u32,
    pub length_bound: Option<LengthBound>,
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reduction({}, c = {})", self.name, self.c)
    }
}

/// `⟨u, x⟩ = double(u)·01·x`.
pub fn pair(u: &BitString, x: &BitString) -> BitString {
    let mut out = u.doubled();
    out.push(0);
    out.push(1);
    out.extend_from(x);
    out
}

/// Inverse of [`pair`] on its image.
pub fn unpair(y: &BitString) -> Option<(BitString, BitString)> {
    let mut u = BitString::new();
    let mut i = 0;
    while i + 1 < y.len() {
        match (y.bit(i), y.bit(i + 1)) {
            (0, 1) => return Some((u, y.slice(i + 2, y.len()))),
            (a, b) if a == b => u.push(a),
            _ => return None,
        }
        i += 2;
    }
    None
}

impl Reduction {
    pub fn new(name: &str, c: u32, length_bound: Option<LengthBound>, f: impl Fn(&BitString) -> BitString + Send + Sync + 'static) -> Self {
        Reduction { name: name.to_string(), f: Arc::new(f), c, length_bound }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &BitString) -> BitString {
        (self.f)(x)
    }

    /// `m_n`, the index of `f(s_n)`; `u64::MAX` when it does not fit.
    pub fn image_index(&self, n: u64) -> u64 {
        let y = self.apply(&string_at(n));
        if y.len() < 64 {
            index_of(&y)
        } else {
            u64::MAX
        }
    }

    /// The `w ≤ y` with `f(w) = y`, by scanning in order. Relies on
    /// monotonicity: `f(s_n) ≥ s_n`, and the scan stops once images pass `y`.
    pub fn preimage(&self, y: &BitString) -> Option<BitString> {
        let top = if y.len() < 64 { index_of(y) } else { u64::MAX };
        for n in 0..=top {
            let w = string_at(n);
            let img = self.apply(&w);
            if img == *y {
                return Some(w);
            }
            if img > *y {
                return None;
            }
        }
        None
    }

    pub fn identity() -> Self {
        Reduction::new("identity", 1, Some(LengthBound { slope: 1.0, offset: 0 }), |x| x.clone())
    }

    /// `x ↦ ⟨0^i, x⟩`.
    pub fn pad(i: usize, c: u32) -> Self {
        let u = BitString::zeros(i);
        Reduction::new(&format!("pad-{i}"), c, Some(LengthBound { slope: 1.01, offset: 2 * i + 2 }), move |x| pair(&u, x))
    }

    /// `x ↦ x1`.
    pub fn append_one() -> Self {
        Reduction::new("append-one", 2, Some(LengthBound { slope: 1.0, offset: 1 }), |x| {
            let mut y = x.clone();
            y.push(1);
            y
        })
    }

    /// `x ↦ double(x)`.
    pub fn doubling() -> Self {
        Reduction::new("doubling", 3, Some(LengthBound { slope: 2.0, offset: 0 }), |x| x.doubled())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub start: u64,
    pub end: u64,
    /// First `n` with `f(s_n) ≥ f(s_{n+1})`.
    pub monotone_violation: Option<u64>,
    /// Two indices with the same image.
    pub collision: Option<(u64, u64)>,
    /// First `(n, m_n)` with `m_n > n^c`.
    pub index_violation: Option<(u64, u64)>,
    /// First `n` breaking the length bound.
    pub length_violation: Option<u64>,
    pub max_m_n: u64,
    pub valid: bool,
}

/// Checks `f` on `s_start, …, s_{end−1}`. Monotonicity is checked on
/// consecutive pairs, which suffices by transitivity.
pub fn validate_reduction(r: &Reduction, range: Range<u64>) -> ReductionReport {
    let mut monotone_violation = None;
    let mut collision = None;
    let mut index_violation = None;
    let mut length_violation = None;
    let mut max_m_n = 0;
    let mut seen: HashMap<BitString, u64> = HashMap::new();
    let mut prev: Option<BitString> = None;
    for n in range.clone() {
        let x = string_at(n);
        let y = r.apply(&x);
        if let Some(p) = &prev {
            if monotone_violation.is_none() && *p >= y {
                monotone_violation = Some(n - 1);
            }
        }
        if let Some(&other) = seen.get(&y) {
            collision.get_or_insert((other, n));
        } else {
            seen.insert(y.clone(), n);
        }
        let m = if y.len() < 64 { index_of(&y) } else { u64::MAX };
        max_m_n = max_m_n.max(m);
        if index_violation.is_none() && m > n.checked_pow(r.c).unwrap_or(u64::MAX) {
            index_violation = Some((n, m));
        }
        if let Some(b) = r.length_bound {
            if length_violation.is_none() && y.len() as f64 > b.slope * x.len() as f64 + b.offset as f64 {
                length_violation = Some(n);
            }
        }
        prev = Some(y);
    }
    let valid = monotone_violation.is_none() && collision.is_none() && index_violation.is_none() && length_violation.is_none();
    ReductionReport {
        reduction: r.name.clone(),
        start: range.start,
        end: range.end,
        monotone_violation,
        collision,
        index_violation,
        length_violation,
        max_m_n,
        valid,
    }
}
