//! Languages over `{0,1}*` and their characteristic prefixes.

use std::fmt;
use std::sync::Arc;

use crate::bits::BitString;

use super::strings::{index_of, string_at};

pub type Decider = Arc<dyn Fn(&BitString) -> bool + Send + Sync>;

#[derive(Clone)]
enum Source {
    Decider(Decider),
    /// `χ_L` up to its stored length.
    Table(BitString),
}

/// A language given by a total decider or a stored characteristic table.
#[derive(Clone)]
pub struct Language {
    name: String,
    source: Source,
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Decider(_) => write!(f, "Language({}, decider)", self.name),
            Source::Table(t) => write!(f, "Language({}, table of {})", self.name, t.len()),
        }
    }
}

impl Language {
    pub fn from_decider(name: &str, decide: impl Fn(&BitString) -> bool + Send + Sync + 'static) -> Self {
        Language { name: name.to_string(), source: Source::Decider(Arc::new(decide)) }
    }

    pub fn from_table(name: &str, chi: BitString) -> Self {
        Language { name: name.to_string(), source: Source::Table(chi) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Membership of `x`, or `None` past the end of a stored table.
    pub fn decide(&self, x: &BitString) -> Option<bool> {
        match &self.source {
            Source::Decider(d) => Some(d(x)),
            Source::Table(t) => {
                if x.len() >= 64 {
                    return None;
                }
                let i = index_of(x);
                (i < t.len() as u64).then(|| t.bit(i as usize) == 1)
            }
        }
    }

    /// Number of strings this language can decide, `None` when unbounded.
    pub fn limit(&self) -> Option<u64> {
        match &self.source {
            Source::Decider(_) => None,
            Source::Table(t) => Some(t.len() as u64),
        }
    }

    pub fn empty() -> Self {
        Language::from_decider("empty", |_| false)
    }

    pub fn all() -> Self {
        Language::from_decider("all", |_| true)
    }

    /// Strings `s_n` with even `n`.
    pub fn even_index() -> Self {
        Language::from_decider("even-index", |x| index_of(x).is_multiple_of(2))
    }

    /// Strings with an even number of ones.
    pub fn even_weight() -> Self {
        Language::from_decider("even-weight", |x| x.count_ones() % 2 == 0)
    }

    /// Strings whose index is a prime.
    pub fn prime_index() -> Self {
        Language::from_decider("prime-index", |x| is_prime(index_of(x)))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `χ_L↾n`, materialized.
#[derive(Clone, Debug)]
pub struct LanguagePrefix {
    language: Language,
    chi: BitString,
}

impl LanguagePrefix {
    pub fn new(language: Language, n: usize) -> Option<Self> {
        let mut p = LanguagePrefix { language, chi: BitString::new() };
        p.extend_to(n).then_some(p)
    }

    /// Grows the prefix to `n` bits. Returns false when the language cannot
    /// decide that far. Never shrinks.
    pub fn extend_to(&mut self, n: usize) -> bool {
        if let Some(limit) = self.language.limit() {
            if n as u64 > limit {
                return false;
            }
        }
        while self.chi.len() < n {
            let s = string_at(self.chi.len() as u64);
            match self.language.decide(&s) {
                Some(b) => self.chi.push(b as u8),
                None => return false,
            }
        }
        true
    }

    pub fn language(&self) -> &Language {
        &self.language
    }

    pub fn chi(&self) -> &BitString {
        &self.chi
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// `L(s_n)`.
    pub fn bit(&self, n: usize) -> u8 {
        self.chi.bit(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn prefix_matches_decider() {
        let p = LanguagePrefix::new(Language::even_weight(), 31).unwrap();
        for n in 0..31 {
            assert_eq!(p.bit(n) == 1, string_at(n as u64).count_ones().is_multiple_of(2));
        }
        assert_eq!(p.chi().prefix(7), bits("1101001"));
    }

    #[test]
    fn table_languages_stop_at_their_end() {
        let l = Language::from_table("t", bits("0110"));
        assert_eq!(l.decide(&bits("0")), Some(true));
        assert_eq!(l.decide(&bits("00")), Some(false));
        assert_eq!(l.decide(&bits("01")), None);
        let mut p = LanguagePrefix::new(l, 2).unwrap();
        assert!(p.extend_to(4));
        assert!(!p.extend_to(5));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn primes() {
        let l = Language::prime_index();
        let p = LanguagePrefix::new(l, 12).unwrap();
        assert_eq!(p.chi(), &bits("001101010001"));
    }
}
