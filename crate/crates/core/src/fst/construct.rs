//! Machine-building constructions behind the complexity-transfer bounds.

use std::collections::{HashMap, VecDeque};

use crate::bits::{bits, BitString};

use super::invert::invert;
use super::{Fst, FstError, State};

/// `A′` with `A′(p) = M(A(p))`: runs `A` and feeds each output label through
/// `M`. States are the reachable pairs `(state of A, state of M)`.
pub fn compose_after(a: &Fst, m: &Fst) -> Fst {
    let mut index: HashMap<(State, State), usize> = HashMap::new();
    let mut pairs = vec![(0, 0)];
    index.insert((0, 0), 0);
    let mut next = Vec::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let (qa, qm) = pairs[id];
        let mut row_next = [0; 2];
        let mut row_out: [BitString; 2] = Default::default();
        for b in 0..2u8 {
            let run = m.run_from(qm, a.output(qa, b));
            let target = (a.next_state(qa, b), run.final_state);
            let t = *index.entry(target).or_insert_with(|| {
                pairs.push(target);
                queue.push_back(pairs.len() - 1);
                pairs.len() - 1
            });
            row_next[b as usize] = t;
            row_out[b as usize] = run.output;
        }
        next.push(row_next);
        out.push(row_out);
    }
    Fst::build(next, out).expect("product of canonical machines is well formed")
}

/// `A′` with `A′(p) = M⁻¹(A(p))·z`.
///
/// A transducer never learns that its input has ended, so it cannot append
/// a trailer. The construction therefore exists only for `z = λ`; a longer
/// `z` within the inversion lag is refused as unrealizable, and one beyond
/// the lag as out of bounds.
pub fn pullback_construction(a: &Fst, m: &Fst, trailer: &BitString) -> Result<Fst, FstError> {
    let inverse = invert(m)?;
    if trailer.len() > inverse.lag {
        return Err(FstError::TrailerTooLong { len: trailer.len(), lag: inverse.lag });
    }
    if !trailer.is_empty() {
        return Err(FstError::TrailerUnrealizable { len: trailer.len() });
    }
    Ok(compose_after(a, &inverse.machine))
}

/// `A′` with `A′(double(x)·01·p) = x·A(p)` for every `x` and `p`.
///
/// Three extra states read the doubled literal: `00` writes `0`, `11` writes
/// `1`, `01` hands control to `A`, and the unused pair `10` is skipped.
pub fn prepend_literal(a: &Fst) -> Fst {
    const LIT: usize = 0;
    const SAW0: usize = 1;
    const SAW1: usize = 2;
    let shift = 3;
    let mut next = vec![[SAW0, SAW1], [LIT, shift], [LIT, LIT]];
    let mut out = vec![
        [BitString::new(), BitString::new()],
        [bits("0"), BitString::new()],
        [BitString::new(), bits("1")],
    ];
    for (row, labels) in a.transitions().iter().zip(a.outputs()) {
        next.push([row[0] + shift, row[1] + shift]);
        out.push(labels.clone());
    }
    Fst::build(next, out).expect("literal prefix machine is well formed")
}

/// The program `double(x)·01·p` read by [`prepend_literal`].
pub fn literal_program(x: &BitString, p: &BitString) -> BitString {
    let mut prog = x.doubled();
    prog.push(0);
    prog.push(1);
    prog.extend_from(p);
    prog
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fst::library;

    #[test]
    fn compose_identity_with_identity() {
        let c = compose_after(&library::identity(), &library::identity());
        for p in BitString::all_up_to(8) {
            assert_eq!(c.apply(&p), p);
        }
    }

    #[test]
    fn compose_with_doubler_matches_two_pass() {
        let a = library::delay();
        let c = compose_after(&a, &library::doubler());
        for p in BitString::all_up_to(8) {
            assert_eq!(c.apply(&p), a.apply(&p).doubled());
        }
    }

    #[test]
    fn pullback_identity_is_noop() {
        let a = library::delay();
        let c = pullback_construction(&a, &library::identity(), &BitString::new()).unwrap();
        assert_eq!(c, a);
    }

    #[test]
    fn pullback_halves_doubled_outputs() {
        let a = compose_after(&library::delay(), &library::doubler());
        let c = pullback_construction(&a, &library::doubler(), &BitString::new()).unwrap();
        for p in BitString::all_up_to(8) {
            assert_eq!(c.apply(&p), library::delay().apply(&p));
        }
    }

    #[test]
    fn pullback_rejects_trailers() {
        let a = library::identity();
        assert_eq!(
            pullback_construction(&a, &library::doubler(), &bits("0")),
            Err(FstError::TrailerTooLong { len: 1, lag: 0 })
        );
        assert_eq!(
            pullback_construction(&a, &library::delay(), &bits("0")),
            Err(FstError::TrailerUnrealizable { len: 1 })
        );
    }

    #[test]
    fn prepend_empty_literal() {
        let a = library::doubler();
        let a2 = prepend_literal(&a);
        for p in BitString::all_up_to(6) {
            assert_eq!(a2.apply(&literal_program(&BitString::new(), &p)), a.apply(&p));
        }
    }

    #[test]
    fn prepend_one_before_identity() {
        let a2 = prepend_literal(&library::identity());
        for p in BitString::all_up_to(8) {
            let mut prog = bits("1101");
            prog.extend_from(&p);
            assert_eq!(a2.apply(&prog), bits("1").concat(&p));
        }
    }
}
