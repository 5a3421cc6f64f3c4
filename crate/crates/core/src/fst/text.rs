//! Plain-text machine files.
//!
//! One transition per line, `state bit next_state output`, where `output` is
//! a bit string or `-` for the empty string. Blank lines and `#` comments are
//! ignored. State 0 is initial; states may be numbered arbitrarily and are
//! renumbered canonically on load.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bits::BitString;

use super::{Fst, FstError};

pub fn parse(text: &str) -> Result<Fst, FstError> {
    let mut rows: BTreeMap<usize, [Option<(usize, BitString)>; 2]> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| FstError::Text { line: lineno + 1, message: msg.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad("expected `state bit next_state output`"));
        }
        let state: usize = fields[0].parse().map_err(|_| bad("bad state"))?;
        let bit: usize = match fields[1] {
            "0" => 0,
            "1" => 1,
            _ => return Err(bad("bit must be 0 or 1")),
        };
        let target: usize = fields[2].parse().map_err(|_| bad("bad next state"))?;
        let output: BitString = fields[3].parse().map_err(|_| bad("bad output string"))?;
        let slot = &mut rows.entry(state).or_default()[bit];
        if slot.is_some() {
            return Err(bad("duplicate transition"));
        }
        *slot = Some((target, output));
    }
    if rows.is_empty() {
        return Err(FstError::NoStates);
    }
    let n = rows.keys().next_back().map_or(0, |&q| q + 1);
    let mut next = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for q in 0..n {
        let row = rows.remove(&q).ok_or(FstError::Text {
            line: 0,
            message: format!("state {q} has no transitions"),
        })?;
        let mut targets = [0; 2];
        let mut outputs: [BitString; 2] = Default::default();
        for (b, entry) in row.into_iter().enumerate() {
            let (t, w) = entry.ok_or(FstError::Text {
                line: 0,
                message: format!("state {q} is missing its {b}-transition"),
            })?;
            targets[b] = t;
            outputs[b] = w;
        }
        next.push(targets);
        out.push(outputs);
    }
    Fst::build(next, out)
}

pub fn render(m: &Fst) -> String {
    let mut s = String::new();
    for (q, (next, out)) in m.transitions().iter().zip(m.outputs()).enumerate() {
        for b in 0..2 {
            let w = if out[b].is_empty() { "-".to_string() } else { out[b].to_string() };
            let _ = writeln!(s, "{q} {b} {} {w}", next[b]);
        }
    }
    s
}
