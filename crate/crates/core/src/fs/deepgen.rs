//! Staged construction of a sequence whose prefixes small machines cannot
//! compress but one larger machine can.
//!
//! Stage `j` picks budgets `(k, k′)`, a `k`-random block `r_j` of the longest
//! length whose constant machine `T_{r_j}` fits in `k′` bits, and appends
//! `S_j = r_j^{u_j/|r_j|}` with `u_j = factor · t_{j−1}` rounded up to a
//! multiple of `|r_j|`. The first stage uses the configured seed length in
//! place of `t_0 = 0`.
//!
//! After each stage the gap `D^k(S_1…S_j) − D^{k′+c}(S_1…S_j)` is certified
//! from below: `D^k` exactly, `D^{k′+c}` from above by replaying a witness
//! (`T_{r_1}` alone at stage 1, afterwards the literal-prefix machine over
//! `T_{r_j}` on `double(S_1…S_{j−1})·01·0^{u_j/|r_j|}`).

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::fst::codec::{constant_machine_size, encode};
use crate::fst::construct::{literal_program, prepend_literal};
use crate::fst::library;

use super::engine::{Engine, Value};
use super::random::{find_fs_random_string, passes};
use super::FsError;

/// `k′` rule: a fixed budget, or the doubly exponential `2^{2^{k+1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KPrime {
    Fixed(usize),
    DoublyExponential,
}

/// Constants of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalePack {
    /// Small budgets, cycled through by the schedule.
    pub ks: Vec<usize>,
    pub kprime: KPrime,
    pub factor: usize,
    pub gap_target: f64,
    pub seed_length: usize,
    pub stages: usize,
    /// Candidate limit for each random-block search.
    pub search_budget: u64,
}

impl Default for ScalePack {
    fn default() -> Self {
        ScalePack {
            ks: vec![10],
            kprime: KPrime::Fixed(64),
            factor: 12,
            gap_target: 0.25,
            seed_length: 8,
            stages: 3,
            search_budget: 1 << 16,
        }
    }
}

impl ScalePack {
    pub fn validate(&self) -> Result<(), FsError> {
        let bad = |m: &str| Err(FsError::Invalid(m.to_string()));
        if self.ks.is_empty() {
            return bad("scale pack needs at least one k");
        }
        if self.factor == 0 || self.seed_length == 0 {
            return bad("factor and seed length must be positive");
        }
        if !(self.gap_target.is_finite() && self.gap_target >= 0.0) {
            return bad("gap target must be a nonnegative number");
        }
        Ok(())
    }
}

/// `2^{2^{k+1}}` when it fits in 128 bits.
pub fn doubly_exponential_kprime(k: u32) -> Option<u128> {
    let e = 1u32.checked_shl(k + 1)?;
    1u128.checked_shl(e)
}

/// `(k, k′)` for stage `j ≥ 1`, cycling over the configured `k` values.
pub fn phi_schedule(j: usize, pack: &ScalePack) -> Result<(usize, usize), FsError> {
    assert!(j >= 1, "stages are numbered from 1");
    let k = pack.ks[(j - 1) % pack.ks.len()];
    let kprime = match pack.kprime {
        KPrime::Fixed(v) => v,
        KPrime::DoublyExponential => doubly_exponential_kprime(k as u32)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| FsError::Invalid(format!("2^(2^{}) does not fit a machine budget", k + 1)))?,
    };
    Ok((k, kprime))
}

/// Longest `|r|` with `|T_r| ≤ kprime`.
pub fn block_length(kprime: usize) -> Option<usize> {
    (1..=kprime).take_while(|&len| constant_machine_size(len) <= kprime).last()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub j: usize,
    pub k: usize,
    pub kprime: usize,
    pub r: BitString,
    pub dk_r: Value,
    pub r_threshold: i64,
    pub r_passes: bool,
    pub u: usize,
    pub copies: usize,
    /// `t_j = |S_1…S_j|`.
    pub t: usize,
    pub dk_prefix: Value,
    /// Budget the witness fits in, `k′` at stage 1 and `k′ + c` after.
    pub upper_budget: usize,
    pub upper_bound: usize,
    pub witness_machine_bits: usize,
    pub witness_program_len: usize,
    /// `D^k − upper_bound`, a lower bound on the true gap.
    pub gap: i64,
    pub gap_over_n: f64,
    pub target: f64,
    pub meets_target: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeepGenState {
    pub pack: ScalePack,
    pub prefix: BitString,
    pub stages: Vec<StageRecord>,
}

impl DeepGenState {
    pub fn new(pack: ScalePack) -> Result<Self, FsError> {
        pack.validate()?;
        Ok(DeepGenState { pack, prefix: BitString::new(), stages: Vec::new() })
    }

    /// Index of the next stage.
    pub fn next_stage(&self) -> usize {
        self.stages.len() + 1
    }

    pub fn t(&self) -> usize {
        self.prefix.len()
    }
}

/// Builds the next stage and records its certificate.
pub fn deep_generate<'a>(state: &'a mut DeepGenState, engine: &Engine) -> Result<&'a StageRecord, FsError> {
    let j = state.next_stage();
    let (k, kprime) = phi_schedule(j, &state.pack)?;
    let len = block_length(kprime).ok_or(FsError::InfeasibleStage { kprime })?;
    let found = find_fs_random_string(engine, k, len, state.pack.search_budget)?;
    let r = found.r;

    let t_prev = if j == 1 { state.pack.seed_length } else { state.t() };
    let u = (state.pack.factor * t_prev).div_ceil(len).max(1) * len;
    let copies = u / len;

    let t_r = library::constant(&r);
    let zeros = BitString::zeros(copies);
    let (machine, program, upper_budget) = if j == 1 {
        (t_r, zeros, kprime)
    } else {
        let a = prepend_literal(&t_r);
        let c = a.size() - t_r.size();
        (a, literal_program(&state.prefix, &zeros), kprime + c)
    };

    state.prefix.extend_from(&r.repeat(copies));
    assert_eq!(machine.apply(&program), state.prefix, "stage witness must replay");
    assert!(machine.size() <= upper_budget);

    let dk_prefix = engine.fs_complexity(k, &state.prefix).value;
    let t = state.t();
    let upper = program.len();
    let gap = match dk_prefix {
        Value::Finite(d) => d as i64 - upper as i64,
        Value::Infinite => i64::MAX,
    };
    let gap_over_n = gap as f64 / t as f64;
    let record = StageRecord {
        j,
        k,
        kprime,
        r_passes: passes(k, &r, found.dk),
        r,
        dk_r: found.dk,
        r_threshold: found.threshold,
        u,
        copies,
        t,
        dk_prefix,
        upper_budget,
        upper_bound: upper,
        witness_machine_bits: encode(&machine).len(),
        witness_program_len: upper,
        gap,
        gap_over_n,
        target: state.pack.gap_target,
        meets_target: gap_over_n >= state.pack.gap_target,
    };
    state.stages.push(record);
    Ok(state.stages.last().expect("just pushed"))
}

/// Runs `pack.stages` stages.
pub fn run_pack(pack: ScalePack, engine: &Engine) -> Result<DeepGenState, FsError> {
    let mut state = DeepGenState::new(pack)?;
    for _ in 0..state.pack.stages {
        deep_generate(&mut state, engine)?;
    }
    Ok(state)
}

/// Prefix of at least `n` bits, truncated to `n`, running as many stages as
/// needed regardless of `pack.stages`.
pub fn deep_prefix(pack: &ScalePack, engine: &Engine, n: usize) -> Result<BitString, FsError> {
    let mut state = DeepGenState::new(pack.clone())?;
    while state.t() < n {
        deep_generate(&mut state, engine)?;
    }
    Ok(state.prefix.prefix(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubly_exponential_kprime_values() {
        assert_eq!(doubly_exponential_kprime(1), Some(16));
        assert_eq!(doubly_exponential_kprime(2), Some(256));
        assert_eq!(doubly_exponential_kprime(3), Some(65536));
        assert_eq!(doubly_exponential_kprime(7), None);
    }

    #[test]
    fn schedule_cycles() {
        let pack = ScalePack { ks: vec![1, 2], kprime: KPrime::DoublyExponential, ..ScalePack::default() };
        let seq: Vec<_> = (1..=6).map(|j| phi_schedule(j, &pack).unwrap()).collect();
        assert_eq!(seq, vec![(1, 16), (2, 256), (1, 16), (2, 256), (1, 16), (2, 256)]);
    }

    #[test]
    fn block_length_fits() {
        assert_eq!(block_length(64), Some(51));
        assert_eq!(constant_machine_size(51), 64);
        assert_eq!(block_length(3), None);
    }

    #[test]
    fn stages_are_multiples_and_certified() {
        let engine = Engine::new(None, 0);
        let pack = ScalePack { stages: 2, ..ScalePack::default() };
        let state = run_pack(pack, &engine).unwrap();
        let mut t = 0;
        for s in &state.stages {
            assert!(s.u > 0 && s.u % s.r.len() == 0);
            t += s.u;
            assert_eq!(s.t, t);
            assert!(s.r_passes);
            assert!(s.meets_target, "stage {} gap {}", s.j, s.gap_over_n);
        }
        assert_eq!(state.prefix.len(), t);
    }
}
