//! Binary strings.
//!
//! Bits are stored one per byte (`0` or `1`). Strings in this crate are short
//! (machine encodings, programs, sequence prefixes of a few hundred thousand
//! bits at most), so the unpacked layout keeps indexing and slicing simple.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {ch:?} at position {pos}")]
pub struct ParseBitsError {
    pub ch: char,
    pub pos: usize,
}

/// A finite binary string.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self(Vec::with_capacity(cap))
    }

    /// Builds a string from raw bits; every element must be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The `width`-bit big-endian binary representation of `value`.
    pub fn from_u64(value: u64, width: usize) -> Self {
        Self((0..width).rev().map(|i| ((value >> i) & 1) as u8).collect())
    }

    /// Bytes read most-significant bit first.
    pub fn from_bytes_msb(bytes: &[u8]) -> Self {
        let mut out = Vec::with_capacity(bytes.len() * 8);
        for &byte in bytes {
            for i in (0..8).rev() {
                out.push((byte >> i) & 1);
            }
        }
        Self(out)
    }

    /// Packs the bits MSB-first, zero-padding the final byte.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)))
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn extend_from_slice(&mut self, bits: &[u8]) {
        self.0.extend_from_slice(bits);
    }

    pub fn truncate(&mut self, n: usize) {
        self.0.truncate(n);
    }

    /// `self↾n`, the first `n` bits (the whole string if shorter).
    pub fn prefix(&self, n: usize) -> BitString {
        Self(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self(self.0[start..end].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Self(v)
    }

    /// Every bit written twice: `01` becomes `0011`.
    pub fn doubled(&self) -> BitString {
        Self(self.0.iter().flat_map(|&b| [b, b]).collect())
    }

    /// `self` repeated `copies` times.
    pub fn repeat(&self, copies: usize) -> BitString {
        Self(self.0.repeat(copies))
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Interprets the bits as a big-endian unsigned integer. Only meaningful for
    /// strings of at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Length-lexicographic order: shorter strings first, then alphabetical.
    pub fn cmp_length_lex(&self, other: &BitString) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Plain lexicographic order (a proper prefix sorts first).
    pub fn cmp_lex(&self, other: &BitString) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// The next string of the same length in lexicographic order, or `None`
    /// after `1^n`.
    pub fn next_same_length(&self) -> Option<BitString> {
        let mut v = self.0.clone();
        for i in (0..v.len()).rev() {
            if v[i] == 0 {
                v[i] = 1;
                for b in &mut v[i + 1..] {
                    *b = 0;
                }
                return Some(Self(v));
            }
        }
        None
    }

    /// All strings of length exactly `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "refusing to enumerate 2^{n} strings");
        (0..(1u64 << n)).map(move |v| BitString::from_u64(v, n))
    }

    /// All strings of length at most `n`, in length-lexicographic order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = BitString> {
        (0..=n).flat_map(BitString::all_of_length)
    }
}

/// Strings are ordered length-lexicographically, matching the standard
/// enumeration `s_0 = λ, s_1 = 0, s_2 = 1, s_3 = 00, ...`.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_length_lex(other)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("λ")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    /// Parses `0`/`1` characters. `λ` and `-` denote the empty string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "λ" || s == "-" {
            return Ok(Self::new());
        }
        s.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(ParseBitsError { ch, pos }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl From<&[u8]> for BitString {
    fn from(bits: &[u8]) -> Self {
        Self::from_bits(bits.to_vec())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `bits("0110")`. Panics on bad input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(bits("0110").to_string(), "0110");
        assert!(bits("λ").is_empty());
        assert_eq!("01x".parse::<BitString>(), Err(ParseBitsError { ch: 'x', pos: 2 }));
    }

    #[test]
    fn length_lex_order() {
        let mut v: Vec<BitString> = ["1", "00", "0", "", "01"].iter().map(|s| bits(s)).collect();
        v.sort_by(|a, b| a.cmp_length_lex(b));
        let shown: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["", "0", "1", "00", "01"]);
    }

    #[test]
    fn bytes_round_trip_msb_first() {
        let b = BitString::from_bytes_msb(&[0b1000_0001, 0x0f]);
        assert_eq!(b.to_string(), "1000000100001111");
        assert_eq!(b.to_bytes_msb(), vec![0b1000_0001, 0x0f]);
    }

    #[test]
    fn doubling_and_successor() {
        assert_eq!(bits("01").doubled(), bits("0011"));
        assert_eq!(bits("011").next_same_length(), Some(bits("100")));
        assert_eq!(bits("11").next_same_length(), None);
        assert_eq!(BitString::all_up_to(2).count(), 7);
    }
}
