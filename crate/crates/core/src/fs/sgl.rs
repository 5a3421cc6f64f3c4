//! Empirical check of the finite-state slow growth argument.
//!
//! With `S′ = M(S)`, `m_n` the least `m` with `M(S↾m) = S′↾n`, shift `c`,
//! `k = l + c` and `l′ = k′ + c`, the argument claims
//!
//! ```text
//! D^l(S↾m_n) − D^{l′}(S↾m_n)  ≥  D^k(S′↾n) − D^{k′}(S′↾n).
//! ```
//!
//! Budgets above `cap` are not enumerated. `D^{l′}` is then bounded above by
//! `D^{cap}`, which only shrinks the left side, so a pass is still a pass.
//! `k` and `k′` must stay within `cap` so the right side is exact.

use serde::Serialize;

use crate::bits::BitString;
use crate::fst::lossless::is_information_lossless;
use crate::fst::stream::{beta_asymptotic, beta_uniform};
use crate::fst::{Fst, FstError};

use super::depth::{profile_from_table, DepthProfile};
use super::engine::{Engine, Value};
use super::FsError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SglConfig {
    pub l: usize,
    pub kprime: usize,
    /// Measured shift `max(c1, c2)` for `M`.
    pub c: usize,
    pub cap: usize,
    pub grid: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SglRow {
    pub n: usize,
    pub m_n: usize,
    pub dl: Value,
    /// `D^{min(l′, cap)}(S↾m_n)`, an upper bound on `D^{l′}`.
    pub dlprime_upper: Value,
    pub dk: Value,
    pub dkprime: Value,
    pub lhs_lower: Option<i64>,
    pub rhs: Option<i64>,
    /// Only meaningful when `rhs > 0`.
    pub holds: bool,
    pub beta_asymptotic_ok: bool,
    pub beta_uniform_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SglReport {
    pub config: SglConfig,
    pub k: usize,
    pub lprime: usize,
    pub lprime_exact: bool,
    pub beta_asymptotic: f64,
    pub beta_uniform: f64,
    pub rows: Vec<SglRow>,
    /// Grid points with positive right side.
    pub positive_rhs: usize,
    pub violations: usize,
    pub source_profile: DepthProfile,
    pub image_profile: DepthProfile,
}

/// `m_n` for every `n ≤ |M(prefix)|` at which some prefix of the input
/// produces exactly `n` bits.
pub fn alignment(m: &Fst, prefix: &BitString) -> Vec<Option<usize>> {
    let mut out_len = 0;
    let mut table = vec![None; 1];
    table[0] = Some(0);
    let mut q = 0;
    for (i, b) in prefix.iter().enumerate() {
        out_len += m.output(q, b).len();
        q = m.next_state(q, b);
        if table.len() <= out_len {
            table.resize(out_len + 1, None);
        }
        if table[out_len].is_none() {
            table[out_len] = Some(i + 1);
        }
    }
    table
}

pub fn sgl_experiment(engine: &Engine, sequence: &str, prefix: &BitString, m: &Fst, config: &SglConfig) -> Result<SglReport, FsError> {
    if !is_information_lossless(m).is_lossless() {
        return Err(FstError::NotLossless.into());
    }
    let k = config.l + config.c;
    let lprime = config.kprime + config.c;
    if k > config.cap || config.kprime > config.cap {
        return Err(FsError::Invalid(format!(
            "k = {k} and k' = {} must not exceed the cap {}",
            config.kprime, config.cap
        )));
    }
    if k >= config.kprime {
        return Err(FsError::Invalid(format!("need l + c = {k} < k' = {}", config.kprime)));
    }
    let image = m.apply(prefix);
    let align = alignment(m, prefix);
    let ba = beta_asymptotic(m);
    let bu = beta_uniform(m);

    let points: Vec<(usize, usize)> = config
        .grid
        .iter()
        .filter_map(|&n| align.get(n).copied().flatten().map(|mn| (n, mn)))
        .collect();
    let sources: Vec<BitString> = points.iter().map(|&(_, mn)| prefix.prefix(mn)).collect();
    let images: Vec<BitString> = points.iter().map(|&(n, _)| image.prefix(n)).collect();
    let lprime_used = lprime.min(config.cap);
    let table = engine.table(sources.iter().chain(images.iter()), config.cap);

    let mut rows = Vec::new();
    let (mut positive_rhs, mut violations) = (0, 0);
    for (i, &(n, mn)) in points.iter().enumerate() {
        let s = &sources[i];
        let t = &images[i];
        let dl = table.value(config.l, s);
        let dlprime_upper = table.value(lprime_used, s);
        let dk = table.value(k, t);
        let dkprime = table.value(config.kprime, t);
        let lhs_lower = dl.diff(dlprime_upper);
        let rhs = dk.diff(dkprime);
        let holds = match (lhs_lower, rhs) {
            (_, Some(r)) if r <= 0 => true,
            (Some(l), Some(r)) => l >= r,
            _ => false,
        };
        if rhs.is_some_and(|r| r > 0) {
            positive_rhs += 1;
            if !holds {
                violations += 1;
            }
        }
        rows.push(SglRow {
            n,
            m_n: mn,
            dl,
            dlprime_upper,
            dk,
            dkprime,
            lhs_lower,
            rhs,
            holds,
            beta_asymptotic_ok: n as f64 >= ba * mn as f64,
            beta_uniform_ok: n as f64 >= bu * mn as f64,
        });
    }
    let source_profile = profile_from_table(&table, sequence, &sources, &[(config.l, lprime_used)]);
    let image_profile = profile_from_table(&table, &format!("M({sequence})"), &images, &[(k, config.kprime)]);
    Ok(SglReport {
        config: config.clone(),
        k,
        lprime,
        lprime_exact: lprime <= config.cap,
        beta_asymptotic: ba,
        beta_uniform: bu,
        rows,
        positive_rhs,
        violations,
        source_profile,
        image_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::fst::library;

    #[test]
    fn identity_aligns_trivially() {
        let s = bits("110111001011101111000");
        let a = alignment(&library::identity(), &s);
        assert!(a.iter().enumerate().all(|(n, m)| *m == Some(n)));

        let engine = Engine::new(None, 1);
        let config = SglConfig { l: 10, kprime: 14, c: 0, cap: 14, grid: vec![4, 8, 16, 21] };
        let r = sgl_experiment(&engine, "champernowne", &s, &library::identity(), &config).unwrap();
        for row in &r.rows {
            assert_eq!(row.m_n, row.n);
            assert_eq!(row.dl, row.dk);
            assert_eq!(row.dlprime_upper, row.dkprime);
        }
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn doubler_aligns_even_lengths() {
        let a = alignment(&library::doubler(), &bits("0110"));
        assert_eq!(a, vec![Some(0), None, Some(1), None, Some(2), None, Some(3), None, Some(4)]);
    }

    #[test]
    fn doubler_on_zeros_holds() {
        let engine = Engine::new(None, 0);
        let s = BitString::zeros(64);
        let config = SglConfig { l: 10, kprime: 16, c: 2, cap: 16, grid: (2..=128).step_by(6).collect() };
        let r = sgl_experiment(&engine, "zeros", &s, &library::doubler(), &config).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.rows.iter().all(|row| row.beta_uniform_ok));
    }
}
