//! Oblivious predictors with exact rational probabilities.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;

use super::language::Language;

pub type OneProbability = Arc<dyn Fn(&BitString) -> BigRational + Send + Sync>;

/// `P(x, b)`, stored as `P(x, 1)` so that `P(x, 0) + P(x, 1) = 1` by
/// construction.
#[derive(Clone)]
pub struct Predictor {
    name: String,
    /// Informational only.
    cost: String,
    one: OneProbability,
}

impl fmt::Debug for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predictor({})", self.name)
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Predictor {
    pub fn new(name: &str, cost: &str, one: impl Fn(&BitString) -> BigRational + Send + Sync + 'static) -> Self {
        Predictor { name: name.to_string(), cost: cost.to_string(), one: Arc::new(one) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cost(&self) -> &str {
        &self.cost
    }

    pub fn prob(&self, x: &BitString, b: u8) -> BigRational {
        let one = (self.one)(x);
        if b == 1 {
            one
        } else {
            BigRational::one() - one
        }
    }

    /// True when `P(x, 1)` lies in `[0, 1]`.
    pub fn is_valid_at(&self, x: &BitString) -> bool {
        let one = (self.one)(x);
        one >= BigRational::zero() && one <= BigRational::one()
    }

    pub fn uniform() -> Self {
        Predictor::new("uniform", "O(1)", |_| ratio(1, 2))
    }

    pub fn constant(p: BigRational) -> Self {
        Predictor::new(&format!("constant-{p}"), "O(1)", move |_| p.clone())
    }

    /// Certain of membership everywhere it is asked.
    pub fn perfect(language: &Language) -> Self {
        let l = language.clone();
        Predictor::new(&format!("perfect-{}", language.name()), "decider", move |x| {
            if l.decide(x).unwrap_or(false) {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// `3/4` on strings ending in 1, `1/4` otherwise.
    pub fn last_bit() -> Self {
        Predictor::new("last-bit", "O(1)", |x| {
            if !x.is_empty() && x.bit(x.len() - 1) == 1 {
                ratio(3, 4)
            } else {
                ratio(1, 4)
            }
        })
    }

    /// `|x| / (|x| + 2)`; grows more confident with length.
    pub fn length_confident() -> Self {
        Predictor::new("length-confident", "O(log n)", |x| ratio(x.len() as i64 + 1, x.len() as i64 + 2))
    }

    /// `1/2 ± 1/2^{|x|+2}` by parity of weight.
    pub fn dyadic_weight() -> Self {
        Predictor::new("dyadic-weight", "O(log n)", |x| {
            let eps = BigRational::new(BigInt::one(), BigInt::one() << (x.len() + 2));
            if x.count_ones() % 2 == 0 {
                ratio(1, 2) + eps
            } else {
                ratio(1, 2) - eps
            }
        })
    }
}

/// Predictors used by the sweeps and demos.
pub fn predictor_corpus() -> Vec<Predictor> {
    vec![
        Predictor::uniform(),
        Predictor::constant(ratio(3, 4)),
        Predictor::last_bit(),
        Predictor::length_confident(),
        Predictor::dyadic_weight(),
        Predictor::perfect(&Language::even_weight()),
        Predictor::perfect(&Language::empty()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::strings::string_at;

    #[test]
    fn corpus_is_normalized() {
        for p in predictor_corpus() {
            for n in 0..512 {
                let x = string_at(n);
                assert!(p.is_valid_at(&x), "{} at {x}", p.name());
                assert_eq!(p.prob(&x, 0) + p.prob(&x, 1), BigRational::one());
            }
        }
    }

    #[test]
    fn perfect_for_empty_says_no() {
        let p = Predictor::perfect(&Language::empty());
        for n in 0..64 {
            assert_eq!(p.prob(&string_at(n), 0), BigRational::one());
        }
    }
}
