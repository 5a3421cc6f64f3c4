use std::collections::VecDeque;

use crate::bits::BitString;

use super::FstError;

/// State index. The initial state is always 0.
pub type State = usize;

/// A deterministic finite-state transducer over the binary alphabet.
///
/// Every instance is canonical: all states are reachable from state 0 and
/// states are numbered in breadth-first discovery order (0-edge before
/// 1-edge). [`Fst::build`] establishes this for arbitrary tables, so two
/// machines with the same behaviour up to renaming compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fst {
    next: Vec<[State; 2]>,
    out: Vec<[BitString; 2]>,
}

/// Result of running a machine on a finite input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub output: BitString,
    pub final_state: State,
}

impl Fst {
    /// Builds a canonical machine from raw transition and output tables with
    /// initial state 0. Unreachable states are dropped and the rest renumbered.
    pub fn build(next: Vec<[State; 2]>, out: Vec<[BitString; 2]>) -> Result<Self, FstError> {
        if next.is_empty() {
            return Err(FstError::NoStates);
        }
        if next.len() != out.len() {
            return Err(FstError::TableMismatch {
                transitions: next.len(),
                outputs: out.len(),
            });
        }
        let n = next.len();
        for (q, row) in next.iter().enumerate() {
            for &t in row {
                if t >= n {
                    return Err(FstError::StateOutOfRange { state: q, target: t, count: n });
                }
            }
        }
        let order = bfs_order(&next);
        let mut rename = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let next = order
            .iter()
            .map(|&old| [rename[next[old][0]], rename[next[old][1]]])
            .collect();
        let out = order.iter().map(|&old| out[old].clone()).collect();
        Ok(Self { next, out })
    }

    /// Builds from tables that are already canonical, failing otherwise.
    pub fn from_canonical(next: Vec<[State; 2]>, out: Vec<[BitString; 2]>) -> Result<Self, FstError> {
        let n = next.len();
        if n == 0 {
            return Err(FstError::NoStates);
        }
        for (q, row) in next.iter().enumerate() {
            for &t in row {
                if t >= n {
                    return Err(FstError::StateOutOfRange { state: q, target: t, count: n });
                }
            }
        }
        let order = bfs_order(&next);
        if order.len() != n {
            return Err(FstError::Unreachable { reachable: order.len(), count: n });
        }
        if order.iter().enumerate().any(|(i, &q)| i != q) {
            return Err(FstError::NotBfsOrdered);
        }
        if out.len() != n {
            return Err(FstError::TableMismatch { transitions: n, outputs: out.len() });
        }
        Ok(Self { next, out })
    }

    pub(crate) fn from_parts_unchecked(next: Vec<[State; 2]>, out: Vec<[BitString; 2]>) -> Self {
        debug_assert!(Self::from_canonical(next.clone(), out.clone()).is_ok());
        Self { next, out }
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn next_state(&self, q: State, bit: u8) -> State {
        self.next[q][bit as usize]
    }

    pub fn output(&self, q: State, bit: u8) -> &BitString {
        &self.out[q][bit as usize]
    }

    pub fn transitions(&self) -> &[[State; 2]] {
        &self.next
    }

    pub fn outputs(&self) -> &[[BitString; 2]] {
        &self.out
    }

    /// Longest output label on any transition.
    pub fn max_output_len(&self) -> usize {
        self.out
            .iter()
            .flat_map(|row| row.iter().map(BitString::len))
            .max()
            .unwrap_or(0)
    }

    /// `T(p)` together with `δ̂(p)`.
    pub fn run(&self, program: &BitString) -> Run {
        self.run_from(0, program)
    }

    pub fn run_from(&self, start: State, program: &BitString) -> Run {
        let mut q = start;
        let mut output = BitString::new();
        for b in program.iter() {
            output.extend_from(&self.out[q][b as usize]);
            q = self.next[q][b as usize];
        }
        Run { output, final_state: q }
    }

    /// `T(p)` alone.
    pub fn apply(&self, program: &BitString) -> BitString {
        self.run(program).output
    }

    /// `δ̂(p)`.
    pub fn final_state(&self, program: &BitString) -> State {
        program.iter().fold(0, |q, b| self.next[q][b as usize])
    }

    /// Size in bits of the canonical encoding, `|T| = |σ_T|`.
    pub fn size(&self) -> usize {
        super::codec::encoded_size(self)
    }

    /// A shortest input driving the machine from state 0 to each state, in
    /// BFS order. Entry `q` is the lexicographically least such input.
    pub fn access_strings(&self) -> Vec<BitString> {
        let n = self.state_count();
        let mut access: Vec<Option<BitString>> = vec![None; n];
        access[0] = Some(BitString::new());
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for b in 0..2u8 {
                let t = self.next[q][b as usize];
                if access[t].is_none() {
                    let mut s = access[q].clone().expect("visited");
                    s.push(b);
                    access[t] = Some(s);
                    queue.push_back(t);
                }
            }
        }
        access.into_iter().map(|s| s.expect("canonical machines are connected")).collect()
    }
}

/// States reachable from 0 in BFS discovery order.
fn bfs_order(next: &[[State; 2]]) -> Vec<State> {
    let mut seen = vec![false; next.len()];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        for &t in &next[q] {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::fst::library;

    #[test]
    fn identity_runs_verbatim() {
        let id = library::identity();
        let run = id.run(&bits("0110"));
        assert_eq!(run.output, bits("0110"));
        assert_eq!(run.final_state, 0);
    }

    #[test]
    fn empty_input_gives_empty_output() {
        for m in [library::identity(), library::doubler(), library::delay()] {
            let run = m.run(&BitString::new());
            assert!(run.output.is_empty());
            assert_eq!(run.final_state, 0);
        }
    }

    #[test]
    fn constant_output_machine_by_hand() {
        // three transitions, each writing "10"
        let m = library::constant(&bits("10"));
        assert_eq!(m.apply(&bits("001")), bits("101010"));
    }

    #[test]
    fn build_renumbers_and_drops_unreachable() {
        // state 2 is the real successor, state 1 is unreachable
        let next = vec![[2, 2], [1, 1], [0, 2]];
        let out = vec![
            [bits("0"), bits("1")],
            [bits(""), bits("")],
            [bits("1"), bits("0")],
        ];
        let m = Fst::build(next, out).unwrap();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.transitions(), &[[1, 1], [0, 1]]);
        assert_eq!(m.output(1, 0), &bits("1"));
    }

    #[test]
    fn from_canonical_rejects_bad_numbering() {
        let next = vec![[0, 2], [0, 0], [1, 0]];
        let out = vec![[bits(""), bits("")]; 3];
        assert_eq!(Fst::from_canonical(next, out), Err(FstError::NotBfsOrdered));
        let next = vec![[0, 0], [1, 1]];
        let out = vec![[bits(""), bits("")]; 2];
        assert!(matches!(Fst::from_canonical(next, out), Err(FstError::Unreachable { .. })));
    }
}
