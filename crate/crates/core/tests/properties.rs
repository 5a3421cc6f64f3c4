use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use fsdepth_core::fs::cache::ComplexityCache;
use fsdepth_core::fs::{ComplexityValue, Engine, Value};
use fsdepth_core::fst::codec::{decode, encode, encoded_size};
use fsdepth_core::fst::construct::{compose_after, literal_program, prepend_literal};
use fsdepth_core::fst::invert::invert;
use fsdepth_core::fst::lossless::{delay_bound, is_information_lossless};
use fsdepth_core::fst::text;
use fsdepth_core::pt::pom::{log2_rational, martingale_avg_check, pom_exact, pom_exact_at, pom_log_series};
use fsdepth_core::pt::predictor::predictor_corpus;
use fsdepth_core::pt::reduction::{pair, unpair, validate_reduction};
use fsdepth_core::pt::strings::{index_of, string_at};
use fsdepth_core::pt::{Language, LanguagePrefix, Reduction};
use fsdepth_core::{BitString, Fst, FstError};

fn bitstring(max: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(0u8..=1, 0..=max).prop_map(BitString::from_bits)
}

/// Random machines with up to four states and labels of up to three bits.
fn machine() -> impl Strategy<Value = Fst> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec([0..n, 0..n], n),
                prop::collection::vec([bitstring(3), bitstring(3)], n),
            )
        })
        .prop_map(|(next, out)| Fst::build(next, out).expect("tables are in range"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoding_round_trips(m in machine()) {
        let e = encode(&m);
        prop_assert_eq!(e.len(), encoded_size(&m));
        prop_assert_eq!(e.len(), m.size());
        prop_assert_eq!(decode(&e).unwrap(), m.clone());
        prop_assert_eq!(text::parse(&text::render(&m)).unwrap(), m);
    }

    #[test]
    fn output_recursion(m in machine(), x in bitstring(12), b in 0u8..=1) {
        let mut xb = x.clone();
        xb.push(b);
        let q = m.final_state(&x);
        prop_assert_eq!(m.apply(&xb), m.apply(&x).concat(m.output(q, b)));
    }

    #[test]
    fn composition_applies_in_order(a in machine(), m in machine(), p in bitstring(12)) {
        prop_assert_eq!(compose_after(&a, &m).apply(&p), m.apply(&a.apply(&p)));
    }

    #[test]
    fn prepended_literals_come_first(a in machine(), x in bitstring(8), p in bitstring(8)) {
        let b = prepend_literal(&a);
        prop_assert_eq!(b.apply(&literal_program(&x, &p)), x.concat(&a.apply(&p)));
    }

    #[test]
    fn lossless_machines_invert(m in machine(), xs in prop::collection::vec(bitstring(24), 8)) {
        prop_assume!(is_information_lossless(&m).is_lossless());
        if delay_bound(&m).is_none() {
            prop_assert!(matches!(invert(&m), Err(FstError::InfiniteOrder)));
            return Ok(());
        }
        let inv = invert(&m).unwrap();
        for x in xs {
            let back = inv.machine.apply(&m.apply(&x));
            prop_assert!(back.is_prefix_of(&x));
            prop_assert!(x.len() - back.len() <= inv.lag);
        }
    }

    #[test]
    fn lossy_verdicts_carry_a_valid_witness(m in machine()) {
        if let fsdepth_core::fst::lossless::IlVerdict::No(w) = is_information_lossless(&m) {
            prop_assert!(w.validate(&m));
        }
    }

    #[test]
    fn string_index_is_an_order_isomorphism(a in 0u64..1 << 20, b in 0u64..1 << 20) {
        prop_assert_eq!(index_of(&string_at(a)), a);
        prop_assert_eq!(a.cmp(&b), string_at(a).cmp(&string_at(b)));
    }

    #[test]
    fn pairing_inverts(u in bitstring(6), x in bitstring(10)) {
        prop_assert_eq!(unpair(&pair(&u, &x)), Some((u, x)));
    }

    #[test]
    fn martingale_identity(w in bitstring(10), i in 0usize..7) {
        let p = &predictor_corpus()[i];
        prop_assert!(martingale_avg_check(p, &w));
    }

    #[test]
    fn normalization(n in 0u64..1 << 16) {
        let x = string_at(n);
        for p in predictor_corpus() {
            prop_assert!(p.is_valid_at(&x));
            prop_assert_eq!(p.prob(&x, 0) + p.prob(&x, 1), BigRational::one());
        }
    }

    #[test]
    fn reductions_accepted_only_when_injective(images in prop::collection::vec(0u64..40, 32)) {
        let table: Vec<BitString> = images.iter().map(|&i| string_at(i)).collect();
        let t = table.clone();
        let r = Reduction::new("table", 8, None, move |x| t[index_of(x) as usize].clone());
        let rep = validate_reduction(&r, 0..32);
        let mut sorted = table.clone();
        sorted.sort();
        sorted.dedup();
        if rep.valid {
            prop_assert_eq!(sorted.len(), table.len());
        }
        prop_assert_eq!(rep.collision.is_none(), sorted.len() == table.len());
    }

    #[test]
    fn value_order_and_arithmetic(a in 0usize..1000, b in 0usize..1000) {
        let (x, y) = (Value::Finite(a), Value::Finite(b));
        prop_assert!(x < Value::Infinite);
        prop_assert_eq!(x.add(y), Value::Finite(a + b));
        prop_assert_eq!(x.diff(y), Some(a as i64 - b as i64));
        prop_assert_eq!(x.add(Value::Infinite), Value::Infinite);
        prop_assert_eq!(x.to_string().parse::<Value>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complexity_is_monotone_in_budget(xs in prop::collection::vec(bitstring(10), 1..6)) {
        let engine = Engine::new(None, 2);
        let table = engine.table(xs.iter(), 15);
        for x in &xs {
            for k in 3..15 {
                prop_assert!(table.value(k + 1, x) <= table.value(k, x));
            }
            let v = table.complexity(&engine, 15, x);
            if let Some(w) = &v.witness {
                prop_assert!(w.replays(15, x));
                prop_assert_eq!(Value::Finite(w.program.len()), v.value);
            }
        }
    }

    #[test]
    fn cache_merge_is_commutative_and_idempotent(
        a in prop::collection::btree_map((3usize..20, bitstring(6)), 0usize..50, 0..20),
        b in prop::collection::btree_map((3usize..20, bitstring(6)), 0usize..50, 0..20),
    ) {
        let fill = |m: &std::collections::BTreeMap<(usize, BitString), usize>| {
            let mut c = ComplexityCache::new(None);
            for ((k, x), v) in m {
                c.insert(*k, x.clone(), ComplexityValue { value: Value::Finite(*v), witness: None }).unwrap();
            }
            c
        };
        // keep key sets disjoint so values cannot conflict
        let b: std::collections::BTreeMap<_, _> = b.into_iter().filter(|(key, _)| !a.contains_key(key)).collect();
        let (ca, cb) = (fill(&a), fill(&b));
        let mut ab = ca.clone();
        ab.merge(&cb).unwrap();
        let mut ba = cb.clone();
        ba.merge(&ca).unwrap();
        prop_assert_eq!(ab.to_text(), ba.to_text());
        let mut aa = ca.clone();
        aa.merge(&ca).unwrap();
        prop_assert_eq!(aa.to_text(), ca.to_text());
    }

    #[test]
    fn pom_log_tracks_exact(n in 0usize..=64, which in 0usize..7) {
        let l = LanguagePrefix::new(Language::prime_index(), 64).unwrap();
        let p = &predictor_corpus()[which];
        let exact = log2_rational(&pom_exact_at(p, &l, n));
        let fast = pom_log_series(p, &l, n)[n];
        if exact.is_finite() {
            prop_assert!((fast - exact).abs() <= 1e-9 * exact.abs().max(1.0));
        } else {
            prop_assert_eq!(fast, exact);
        }
        prop_assert_eq!(pom_exact(p, &l.chi().prefix(n)), pom_exact_at(p, &l, n));
    }
}
