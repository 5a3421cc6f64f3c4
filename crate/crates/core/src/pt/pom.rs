//! The martingale `p(w) = 2^{|w|} ∏_{m<|w|} P(s_m, w[m])` induced by a
//! predictor, exactly and in the log domain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::BitString;

use super::language::LanguagePrefix;
use super::predictor::Predictor;
use super::strings::string_at;

/// `p(w)` as an exact rational.
pub fn pom_exact(p: &Predictor, w: &BitString) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::one() << w.len());
    for (m, b) in w.iter().enumerate() {
        acc *= p.prob(&string_at(m as u64), b);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `p(L↾n)` exactly. Panics if the prefix is shorter than `n`.
pub fn pom_exact_at(p: &Predictor, l: &LanguagePrefix, n: usize) -> BigRational {
    pom_exact(p, &l.chi().prefix(n))
}

fn log2_int(v: &BigInt) -> f64 {
    let bits = v.bits();
    let shift = bits.saturating_sub(60);
    let top = (v >> shift).to_f64().expect("60-bit value fits");
    top.log2() + shift as f64
}

/// `log2 q` for `q ≥ 0`, `NEG_INFINITY` at zero.
pub fn log2_rational(q: &BigRational) -> f64 {
    assert!(!q.is_negative(), "log of a negative value");
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_int(q.numer()) - log2_int(q.denom())
}

/// `log2 p(L↾n)` for every `n ≤ len`, `NEG_INFINITY` once a factor is zero.
pub fn pom_log_series(p: &Predictor, l: &LanguagePrefix, len: usize) -> Vec<f64> {
    assert!(len <= l.len(), "prefix holds {} bits, asked for {len}", l.len());
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for m in 0..len {
        if acc != f64::NEG_INFINITY {
            acc += 1.0 + log2_rational(&p.prob(&string_at(m as u64), l.bit(m)));
        }
        out.push(acc);
    }
    out
}

/// `log2 p(L↾n)`.
pub fn pom_log(p: &Predictor, l: &LanguagePrefix, n: usize) -> f64 {
    pom_log_series(p, l, n)[n]
}

/// `p(w) = (p(w0) + p(w1)) / 2`, exactly.
pub fn martingale_avg_check(p: &Predictor, w: &BitString) -> bool {
    let mut w0 = w.clone();
    w0.push(0);
    let mut w1 = w.clone();
    w1.push(1);
    pom_exact(p, w) * BigRational::from_integer(BigInt::from(2)) == pom_exact(p, &w0) + pom_exact(p, &w1)
}

/// `p′/p`, infinite when `p = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactRatio {
    Finite(BigRational),
    Infinite,
}

impl ExactRatio {
    pub fn of(num: &BigRational, den: &BigRational) -> Self {
        if den.is_zero() {
            ExactRatio::Infinite
        } else {
            ExactRatio::Finite(num / den)
        }
    }

    pub fn log2(&self) -> f64 {
        match self {
            ExactRatio::Finite(q) => log2_rational(q),
            ExactRatio::Infinite => f64::INFINITY,
        }
    }
}

/// `log2 p′ − log2 p`, with `p = 0` giving `+∞` whatever `p′` is.
pub fn log_ratio(log_num: f64, log_den: f64) -> f64 {
    if log_den == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        log_num - log_den
    }
}

/// `log2(a · log2 n)`; `NEG_INFINITY` for `n ≤ 1`.
pub fn log_threshold(a: f64, n: usize) -> f64 {
    if n <= 1 {
        return f64::NEG_INFINITY;
    }
    (a * (n as f64).log2()).log2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRatioRow {
    pub n: usize,
    pub log_ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRatioProfile {
    pub p: String,
    pub p_prime: String,
    pub language: String,
    pub a: f64,
    pub rows: Vec<DepthRatioRow>,
    pub passes: usize,
    /// Reminder that a finite grid only hints at "infinitely many n".
    pub note: &'static str,
}

const FINITE_NOTE: &str = "finite-grid evidence only";

/// Compares `p′(L↾n)/p(L↾n)` with `a log n` on the grid. The prefix must
/// cover the largest grid point.
pub fn depth_ratio_profile(p: &Predictor, p_prime: &Predictor, l: &LanguagePrefix, a: f64, grid: &[usize]) -> DepthRatioProfile {
    assert!(a > 0.0, "a must be positive");
    let top = grid.iter().copied().max().unwrap_or(0);
    let lp = pom_log_series(p, l, top);
    let lq = pom_log_series(p_prime, l, top);
    let rows: Vec<DepthRatioRow> = grid
        .iter()
        .map(|&n| {
            let log_ratio = log_ratio(lq[n], lp[n]);
            let threshold = log_threshold(a, n);
            DepthRatioRow { n, log_ratio, threshold, pass: log_ratio >= threshold }
        })
        .collect();
    DepthRatioProfile {
        p: p.name().to_string(),
        p_prime: p_prime.name().to_string(),
        language: l.language().name().to_string(),
        a,
        passes: rows.iter().filter(|r| r.pass).count(),
        rows,
        note: FINITE_NOTE,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DgpCandidate {
    pub p_prime: String,
    /// Grid points with `p′/p ≥ g(n)`.
    pub qualifying: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DgpEvidence {
    pub p: String,
    pub language: String,
    pub candidates: Vec<DgpCandidate>,
    pub note: &'static str,
}

/// For each candidate `p′`, where on the grid `p′/p` reaches `g(n)`.
pub fn dgp_membership_evidence(
    p: &Predictor,
    g: impl Fn(usize) -> f64,
    l: &LanguagePrefix,
    corpus: &[Predictor],
    grid: &[usize],
) -> DgpEvidence {
    let top = grid.iter().copied().max().unwrap_or(0);
    let lp = pom_log_series(p, l, top);
    let candidates = corpus
        .iter()
        .map(|q| {
            let lq = pom_log_series(q, l, top);
            let qualifying = grid.iter().copied().filter(|&n| log_ratio(lq[n], lp[n]) >= g(n).log2()).collect();
            DgpCandidate { p_prime: q.name().to_string(), qualifying }
        })
        .collect();
    DgpEvidence { p: p.name().to_string(), language: l.language().name().to_string(), candidates, note: FINITE_NOTE }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::language::Language;
    use crate::pt::predictor::{predictor_corpus, ratio};

    fn prefix(l: Language, n: usize) -> LanguagePrefix {
        LanguagePrefix::new(l, n).unwrap()
    }

    #[test]
    fn uniform_is_flat() {
        let l = prefix(Language::prime_index(), 100);
        for n in 0..=100 {
            assert_eq!(pom_exact_at(&Predictor::uniform(), &l, n), BigRational::one());
            assert_eq!(pom_log(&Predictor::uniform(), &l, n), 0.0);
        }
    }

    #[test]
    fn perfect_reaches_two_to_the_n() {
        let lang = Language::even_index();
        let l = prefix(lang.clone(), 64);
        let p = Predictor::perfect(&lang);
        for n in 0..=64 {
            assert_eq!(pom_exact_at(&p, &l, n), BigRational::from_integer(BigInt::one() << n));
            assert_eq!(pom_log(&p, &l, n), n as f64);
        }
    }

    #[test]
    fn zero_factor_is_negative_infinity() {
        let l = prefix(Language::all(), 5);
        let p = Predictor::perfect(&Language::empty());
        assert_eq!(pom_log(&p, &l, 0), 0.0);
        assert_eq!(pom_log(&p, &l, 1), f64::NEG_INFINITY);
        assert_eq!(pom_log(&p, &l, 5), f64::NEG_INFINITY);
        assert!(pom_exact_at(&p, &l, 3).is_zero());
    }

    #[test]
    fn averaging_on_the_empty_prefix() {
        for p in predictor_corpus() {
            assert!(martingale_avg_check(&p, &BitString::new()), "{}", p.name());
        }
    }

    #[test]
    fn log_matches_exact() {
        let l = prefix(Language::prime_index(), 64);
        for p in predictor_corpus() {
            let logs = pom_log_series(&p, &l, 64);
            for n in 0..=64 {
                let exact = log2_rational(&pom_exact_at(&p, &l, n));
                if exact.is_finite() {
                    assert!((logs[n] - exact).abs() <= 1e-9 * exact.abs().max(1.0), "{} at {n}", p.name());
                } else {
                    assert_eq!(logs[n], exact);
                }
            }
        }
    }

    #[test]
    fn self_ratio_fails_from_three() {
        let l = prefix(Language::even_weight(), 40);
        let grid: Vec<usize> = (1..=40).collect();
        let p = Predictor::constant(ratio(3, 4));
        let prof = depth_ratio_profile(&p, &p, &l, 1.0, &grid);
        for r in &prof.rows {
            assert_eq!(r.log_ratio, 0.0);
            assert_eq!(r.pass, r.n < 3, "n = {}", r.n);
        }
    }

    #[test]
    fn uniform_against_perfect_passes() {
        let lang = Language::even_weight();
        let l = prefix(lang.clone(), 64);
        let grid: Vec<usize> = (1..=64).collect();
        let prof = depth_ratio_profile(&Predictor::uniform(), &Predictor::perfect(&lang), &l, 1.0, &grid);
        assert_eq!(prof.passes, 64);
        assert!(prof.rows.iter().all(|r| r.log_ratio == r.n as f64));
    }

    #[test]
    fn perfect_base_is_never_beaten() {
        let lang = Language::prime_index();
        let l = prefix(lang.clone(), 256);
        let grid: Vec<usize> = (3..=256).collect();
        for q in predictor_corpus() {
            let prof = depth_ratio_profile(&Predictor::perfect(&lang), &q, &l, 1.0, &grid);
            assert!(prof.rows.iter().all(|r| r.log_ratio <= 0.0), "{}", q.name());
            assert_eq!(prof.passes, 0);
        }
    }

    #[test]
    fn dgp_evidence_cases() {
        let lang = Language::even_index();
        let l = prefix(lang.clone(), 64);
        let grid: Vec<usize> = (1..=64).collect();
        let corpus = predictor_corpus();
        let ev = dgp_membership_evidence(&Predictor::uniform(), |_| 0.0, &l, &corpus, &grid);
        assert!(ev.candidates.iter().all(|c| c.qualifying.len() == grid.len()));

        let ev = dgp_membership_evidence(&Predictor::uniform(), |n| (n as f64).log2(), &l, &[Predictor::perfect(&lang)], &grid);
        assert_eq!(ev.candidates[0].qualifying, grid);

        let ev = dgp_membership_evidence(&Predictor::uniform(), |_| 1.0, &l, &[], &grid);
        assert!(ev.candidates.is_empty());
    }
}
