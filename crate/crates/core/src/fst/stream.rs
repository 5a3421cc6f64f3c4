//! Running machines on sequence prefixes and auditing their cycles.

use serde::Serialize;

use crate::bits::BitString;

use super::{Fst, State};

/// Evidence that the input drove the machine around a cycle that writes
/// nothing: `state` was revisited at input position `position` with no
/// output since its previous visit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stall {
    pub position: usize,
    pub state: State,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StreamRun {
    pub output: BitString,
    pub final_state: State,
    /// First all-λ cycle traversed, if any.
    pub stall: Option<Stall>,
}

/// `T(S↾n)` for the given prefix, with stall detection.
pub fn stream_run(m: &Fst, prefix: &BitString) -> StreamRun {
    let mut q = 0;
    let mut output = BitString::new();
    let mut silent_since = vec![false; m.state_count()];
    let mut silent_states = vec![0];
    silent_since[0] = true;
    let mut stall = None;
    for (i, b) in prefix.iter().enumerate() {
        let w = m.output(q, b);
        output.extend_from(w);
        q = m.next_state(q, b);
        if !w.is_empty() {
            for s in silent_states.drain(..) {
                silent_since[s] = false;
            }
        } else if silent_since[q] && stall.is_none() {
            stall = Some(Stall { position: i + 1, state: q });
        }
        if !silent_since[q] {
            silent_since[q] = true;
            silent_states.push(q);
        }
    }
    StreamRun { output, final_state: q, stall }
}

/// A cycle of the transition graph whose transitions all write `λ`, as a
/// list of states, or `None` when every cycle writes at least one bit.
pub fn silent_cycle(m: &Fst) -> Option<Vec<State>> {
    let n = m.state_count();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    let mut stack: Vec<State> = Vec::new();
    fn dfs(m: &Fst, q: State, color: &mut [u8], stack: &mut Vec<State>) -> Option<Vec<State>> {
        color[q] = 1;
        stack.push(q);
        for b in 0..2u8 {
            if !m.output(q, b).is_empty() {
                continue;
            }
            let t = m.next_state(q, b);
            if color[t] == 1 {
                let start = stack.iter().position(|&s| s == t).expect("on stack");
                return Some(stack[start..].to_vec());
            }
            if color[t] == 0 {
                if let Some(c) = dfs(m, t, color, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        color[q] = 2;
        None
    }
    for q in 0..n {
        if color[q] == 0 {
            if let Some(c) = dfs(m, q, &mut color, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Minimum over cycles of (bits written) / (bits read), as `(written, read)`.
///
/// Any closed walk splits into simple cycles, so minimising over closed walks
/// of length at most `state_count` gives the minimum over all cycles.
pub fn min_cycle_rate(m: &Fst) -> (usize, usize) {
    let n = m.state_count();
    let inf = usize::MAX;
    let mut best = (inf, 1usize);
    for s in 0..n {
        // walk[v] = least output over walks of the current length from s to v
        let mut walk = vec![inf; n];
        walk[s] = 0;
        for len in 1..=n {
            let mut next = vec![inf; n];
            for (v, &cost) in walk.iter().enumerate() {
                if cost == inf {
                    continue;
                }
                for b in 0..2u8 {
                    let t = m.next_state(v, b);
                    let c = cost + m.output(v, b).len();
                    next[t] = next[t].min(c);
                }
            }
            walk = next;
            if walk[s] != inf && (best.0 == inf || walk[s] * best.1 < best.0 * len) {
                best = (walk[s], len);
            }
        }
    }
    best
}

/// `β` such that `n ≥ β·m` once a run is long enough: written bits per read
/// bit on the cheapest cycle.
pub fn beta_asymptotic(m: &Fst) -> f64 {
    let (w, r) = min_cycle_rate(m);
    w as f64 / r as f64
}

/// A `β` valid for every prefix of every run of an IL machine. Between two
/// writing transitions there are fewer than `state_count` silent ones, so the
/// least `m` with `|T(S↾m)| = n` is at most `state_count · n`.
pub fn beta_uniform(m: &Fst) -> f64 {
    beta_asymptotic(m).min(1.0 / m.state_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::fst::library;

    #[test]
    fn il_machines_have_no_silent_cycle() {
        for (name, m) in library::il_corpus() {
            assert_eq!(silent_cycle(&m), None, "{name}");
            assert!(beta_asymptotic(&m) > 0.0);
        }
        assert_eq!(silent_cycle(&library::silent()), Some(vec![0]));
    }

    #[test]
    fn silent_machine_stalls_on_first_revisit() {
        let run = stream_run(&library::silent(), &bits("0110"));
        assert_eq!(run.stall, Some(Stall { position: 1, state: 0 }));
        assert!(run.output.is_empty());
    }

    #[test]
    fn identity_streams_without_stall() {
        let s = bits("110111001011101111000");
        let run = stream_run(&library::identity(), &s);
        assert_eq!(run.output, s);
        assert_eq!(run.stall, None);
    }

    #[test]
    fn delay_does_not_stall() {
        let run = stream_run(&library::delay(), &bits("00000000"));
        assert_eq!(run.stall, None);
        assert_eq!(run.output, bits("0000000"));
    }

    #[test]
    fn cycle_rates() {
        assert_eq!(min_cycle_rate(&library::identity()), (1, 1));
        assert_eq!(min_cycle_rate(&library::doubler()), (2, 1));
        assert_eq!(beta_asymptotic(&library::delay()), 1.0);
        assert!((beta_uniform(&library::delay()) - 1.0 / 3.0).abs() < 1e-12);
    }
}
