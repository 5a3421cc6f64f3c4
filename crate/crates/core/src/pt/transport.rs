//! Moving predictors across a monotone reduction `f` from `L1` to `L2`.
//!
//! `P1(x, b) = P2(f(x), b)` and `P2′(y, b) = P1′(f⁻¹(y), b)` (or `P2(y, b)`
//! off the image) make the ratio of the two martingales agree:
//! `p1′/p1` through `s_n` equals `p2′/p2` through `s_{m_n}`.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::bits::BitString;

use super::language::Language;
use super::pom::{log_threshold, ExactRatio};
use super::predictor::Predictor;
use super::reduction::{validate_reduction, Reduction, ReductionReport};
use super::strings::string_at;
use super::PtError;

pub fn pullback_predictor(p2: &Predictor, r: &Reduction) -> Predictor {
    let (p2c, rc) = (p2.clone(), r.clone());
    Predictor::new(&format!("{}∘{}", p2.name(), r.name()), "P2 after f", move |x| p2c.prob(&rc.apply(x), 1))
}

/// Table of `f⁻¹` over `s_0, …, s_{domain−1}`, falling back to an ordered
/// scan above `f(s_{domain−1})`.
#[derive(Clone)]
struct Inverse {
    r: Reduction,
    table: Arc<HashMap<BitString, BitString>>,
    last: Option<BitString>,
}

impl Inverse {
    fn new(r: &Reduction, domain: u64) -> Self {
        let table: HashMap<BitString, BitString> = (0..domain)
            .map(|n| {
                let x = string_at(n);
                (r.apply(&x), x)
            })
            .collect();
        let last = domain.checked_sub(1).map(|n| r.apply(&string_at(n)));
        Inverse { r: r.clone(), table: Arc::new(table), last }
    }

    fn get(&self, y: &BitString) -> Option<BitString> {
        match &self.last {
            Some(last) if y <= last => self.table.get(y).cloned(),
            _ => self.r.preimage(y),
        }
    }
}

/// `P2′`. `domain` sizes the inverse table and only affects speed.
pub fn pushforward_predictor(p1_prime: &Predictor, p2: &Predictor, r: &Reduction, domain: u64) -> Predictor {
    let inv = Inverse::new(r, domain);
    let (a, b) = (p1_prime.clone(), p2.clone());
    Predictor::new(&format!("{}⇒{}", p1_prime.name(), r.name()), "P1′ through f⁻¹", move |y| match inv.get(y) {
        Some(x) => a.prob(&x, 1),
        None => b.prob(y, 1),
    })
}

/// `L2 = f(L1)`; strings outside the image are non-members.
pub fn image_language(l1: &Language, r: &Reduction, domain: u64) -> Language {
    let inv = Inverse::new(r, domain);
    let l = l1.clone();
    Language::from_decider(&format!("{}({})", r.name(), l1.name()), move |y| {
        inv.get(y).is_some_and(|x| l.decide(&x).unwrap_or(false))
    })
}

/// Exact `p′/p` through `s_0, …, s_n` for every `n < len`. Factors on
/// which both predictors agree cancel before multiplying, so a shared zero
/// contributes 1 rather than making the ratio `0/0`.
pub fn ratio_series(num: &Predictor, den: &Predictor, l: &Language, len: u64) -> Result<Vec<ExactRatio>, PtError> {
    let (mut a, mut b) = (BigRational::one(), BigRational::one());
    let mut out = Vec::with_capacity(len as usize);
    for n in 0..len {
        let x = string_at(n);
        let bit = l.decide(&x).ok_or(PtError::Undecided { n })? as u8;
        let (pa, pb) = (num.prob(&x, bit), den.prob(&x, bit));
        if pa != pb {
            a *= pa;
            b *= pb;
        }
        out.push(ExactRatio::of(&a, &b));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRow {
    pub n: u64,
    pub m_n: u64,
    pub log_ratio_source: f64,
    pub log_ratio_image: f64,
    /// Exact equality of the two ratios.
    pub equal: bool,
    pub threshold_source: f64,
    pub threshold_image: f64,
    pub pass_source: bool,
    pub pass_image: bool,
    /// `m_n ≤ n^c`.
    pub bound_ok: bool,
    /// `(a/c) log m_n ≤ a log n` whenever `bound_ok`.
    pub threshold_ok: bool,
    /// A source pass inside the bound carries over to the image.
    pub implication_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainInstance {
    pub p2: String,
    pub rows: Vec<ChainRow>,
    pub chain_holds: bool,
    pub transfer_holds: bool,
    pub source_passes: usize,
    pub image_passes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PtSglReport {
    pub l1: String,
    pub l2: String,
    pub reduction: ReductionReport,
    pub c: u32,
    pub a: f64,
    pub a_over_c: f64,
    pub instances: Vec<ChainInstance>,
}

impl PtSglReport {
    pub fn holds(&self) -> bool {
        self.instances.iter().all(|i| i.chain_holds && i.transfer_holds)
    }
}

/// For each `P2` in the corpus, builds `P1`, `P1′` (perfect for `L1`) and
/// `P2′`, then compares both ratios and thresholds for `n ≤ n_max`.
pub fn pt_sgl_demo(l1: &Language, r: &Reduction, corpus: &[Predictor], a: f64, n_max: u64) -> Result<PtSglReport, PtError> {
    let report = validate_reduction(r, 0..n_max + 1);
    if report.monotone_violation.is_some() || report.collision.is_some() {
        return Err(PtError::InvalidReduction { name: r.name().to_string(), report: Box::new(report) });
    }
    let domain = n_max + 1;
    let l2 = image_language(l1, r, domain);
    let p1_prime = Predictor::perfect(l1);
    let m: Vec<u64> = (0..=n_max).map(|n| r.image_index(n)).collect();
    let m_top = m.iter().copied().max().unwrap_or(0);
    if m_top == u64::MAX {
        return Err(PtError::TooLong { n_max });
    }
    let c = r.c.max(1);
    let a_over_c = a / c as f64;

    let mut instances = Vec::new();
    for p2 in corpus {
        let p1 = pullback_predictor(p2, r);
        let p2_prime = pushforward_predictor(&p1_prime, p2, r, domain);
        let source = ratio_series(&p1_prime, &p1, l1, domain)?;
        let image = ratio_series(&p2_prime, p2, &l2, m_top + 1)?;
        let rows: Vec<ChainRow> = (0..=n_max)
            .map(|n| {
                let mn = m[n as usize];
                let (rs, ri) = (&source[n as usize], &image[mn as usize]);
                let (ls, li) = (rs.log2(), ri.log2());
                let threshold_source = log_threshold(a, n as usize);
                let threshold_image = log_threshold(a_over_c, mn as usize);
                let bound_ok = n.checked_pow(c).is_none_or(|b| mn <= b);
                let pass_source = ls >= threshold_source;
                let pass_image = li >= threshold_image;
                ChainRow {
                    n,
                    m_n: mn,
                    log_ratio_source: ls,
                    log_ratio_image: li,
                    equal: rs == ri,
                    threshold_source,
                    threshold_image,
                    pass_source,
                    pass_image,
                    bound_ok,
                    threshold_ok: !bound_ok || threshold_image <= threshold_source + 1e-12,
                    implication_ok: !(bound_ok && pass_source) || pass_image,
                }
            })
            .collect();
        instances.push(ChainInstance {
            p2: p2.name().to_string(),
            chain_holds: rows.iter().all(|r| r.equal),
            transfer_holds: rows.iter().all(|r| r.threshold_ok && r.implication_ok),
            source_passes: rows.iter().filter(|r| r.pass_source).count(),
            image_passes: rows.iter().filter(|r| r.pass_image).count(),
            rows,
        });
    }
    Ok(PtSglReport { l1: l1.name().to_string(), l2: l2.name().to_string(), reduction: report, c, a, a_over_c, instances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::pom::pom_exact;
    use crate::pt::predictor::{predictor_corpus, ratio};
    use crate::pt::strings::index_of;

    #[test]
    fn identity_pullback_and_pushforward_are_no_ops() {
        let r = Reduction::identity();
        let q = Predictor::last_bit();
        let p = Predictor::constant(ratio(1, 3));
        let back = pullback_predictor(&q, &r);
        let fwd = pushforward_predictor(&q, &p, &r, 64);
        for n in 0..200 {
            let x = string_at(n);
            assert_eq!(back.prob(&x, 1), q.prob(&x, 1));
            assert_eq!(fwd.prob(&x, 1), q.prob(&x, 1));
        }
    }

    #[test]
    fn uniform_pulls_back_to_uniform() {
        let back = pullback_predictor(&Predictor::uniform(), &Reduction::pad(2, 8));
        for n in 0..100 {
            assert_eq!(back.prob(&string_at(n), 0), ratio(1, 2));
        }
    }

    #[test]
    fn off_image_falls_back() {
        let r = Reduction::pad(1, 6);
        let p2 = Predictor::constant(ratio(1, 5));
        let fwd = pushforward_predictor(&Predictor::uniform(), &p2, &r, 32);
        assert_eq!(fwd.prob(&string_at(5), 1), ratio(1, 5));
        assert_eq!(fwd.prob(&r.apply(&string_at(5)), 1), ratio(1, 2));
        // past the table
        assert_eq!(fwd.prob(&r.apply(&string_at(500)), 1), ratio(1, 2));
    }

    #[test]
    fn pullback_pom_is_product_over_images() {
        let l1 = Language::even_weight();
        let r = Reduction::append_one();
        let l2 = image_language(&l1, &r, 64);
        let p2 = Predictor::last_bit();
        let p1 = pullback_predictor(&p2, &r);
        for n in 0..=64u64 {
            let w: BitString = (0..n).map(|m| l1.decide(&string_at(m)).unwrap() as u8).collect::<Vec<_>>().as_slice().into();
            let mut direct = BigRational::from_integer((num_bigint::BigInt::from(1)) << n);
            for m in 0..n {
                let y = r.apply(&string_at(m));
                direct *= p2.prob(&y, l2.decide(&y).unwrap() as u8);
            }
            assert_eq!(pom_exact(&p1, &w), direct);
        }
    }

    #[test]
    fn chain_on_identity_has_matching_thresholds() {
        let rep = pt_sgl_demo(&Language::prime_index(), &Reduction::identity(), &predictor_corpus(), 1.0, 64).unwrap();
        assert!(rep.holds());
        for inst in &rep.instances {
            for row in &inst.rows {
                assert_eq!(row.m_n, row.n);
                assert_eq!(row.threshold_source, row.threshold_image);
            }
        }
    }

    #[test]
    fn chain_on_padding() {
        let r = Reduction::pad(1, 2);
        let rep = pt_sgl_demo(&Language::even_weight(), &r, &[Predictor::uniform()], 1.0, 64).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.a_over_c, 0.5);
        let inst = &rep.instances[0];
        assert!(inst.rows.iter().filter(|r| r.bound_ok).all(|r| r.pass_source && r.pass_image));
        assert_eq!(inst.rows[5].m_n, index_of(&r.apply(&string_at(5))));
    }

    #[test]
    fn shared_zero_factors_cancel() {
        // perfect for even weight gives probability 0 to true bits of the
        // image language off the image
        let rep = pt_sgl_demo(&Language::prime_index(), &Reduction::pad(1, 2), &[Predictor::perfect(&Language::even_weight())], 1.0, 64).unwrap();
        assert!(rep.instances[0].chain_holds);
    }

    #[test]
    fn invalid_reductions_are_refused() {
        let r = Reduction::new("trunc", 1, None, |x| x.prefix(x.len().min(2)));
        assert!(matches!(pt_sgl_demo(&Language::all(), &r, &[], 1.0, 16), Err(PtError::InvalidReduction { .. })));
    }
}
