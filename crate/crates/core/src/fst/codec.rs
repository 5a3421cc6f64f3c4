//! The canonical binary representation `σ_T`.
//!
//! Layout, all fields MSB-first:
//!
//! ```text
//! gamma(state_count)
//! for each state q in BFS order:
//!     uniform flag (1 bit): 1 if ν(q,0) = ν(q,1)
//!     if uniform:  record(ν(q,0))
//!     else:        record(ν(q,0)) record(ν(q,1))
//!     δ(q,0) δ(q,1)   each ceil(log2 state_count) bits, absent when state_count = 1
//! record(w) = gamma(|w| + 1) w
//! ```
//!
//! `gamma` is the Elias gamma code (`⌊log2 N⌋` zeros, then `N` in binary).
//! Output lengths are shifted by one because gamma cannot encode zero. A
//! split state whose two outputs coincide is rejected, so every machine has
//! exactly one encoding.

use crate::bits::BitString;

use super::{Fst, FstError};

/// Version of the layout above. Bumping it invalidates persisted caches.
pub const ENCODING_VERSION: u8 = 1;

/// Length of the Elias gamma code of `n >= 1`.
pub fn gamma_len(n: u64) -> usize {
    assert!(n >= 1, "gamma code is defined for n >= 1");
    2 * (63 - n.leading_zeros() as usize) + 1
}

pub fn write_gamma(out: &mut BitString, n: u64) {
    assert!(n >= 1, "gamma code is defined for n >= 1");
    let width = 64 - n.leading_zeros() as usize;
    for _ in 1..width {
        out.push(0);
    }
    out.extend_from(&BitString::from_u64(n, width));
}

/// Bits used by one output record of length `len`.
pub fn record_size(len: usize) -> usize {
    gamma_len(len as u64 + 1) + len
}

/// Width of a next-state index for a machine with `states` states.
pub fn index_width(states: usize) -> usize {
    if states <= 1 {
        0
    } else {
        (usize::BITS - (states - 1).leading_zeros()) as usize
    }
}

/// Size of the fixed part of an encoding: the state count, one flag per
/// state and the next-state indices.
pub fn skeleton_size(states: usize) -> usize {
    gamma_len(states as u64) + states * (1 + 2 * index_width(states))
}

/// Size of the single-state machine that writes `r` on every transition,
/// as a function of `|r|` alone.
pub fn constant_machine_size(len: usize) -> usize {
    skeleton_size(1) + record_size(len)
}

pub fn encoded_size(m: &Fst) -> usize {
    let mut size = skeleton_size(m.state_count());
    for row in m.outputs() {
        size += record_size(row[0].len());
        if row[0] != row[1] {
            size += record_size(row[1].len());
        }
    }
    size
}

pub fn encode(m: &Fst) -> BitString {
    let n = m.state_count();
    let w = index_width(n);
    let mut out = BitString::with_capacity(encoded_size(m));
    write_gamma(&mut out, n as u64);
    for (row, next) in m.outputs().iter().zip(m.transitions()) {
        let uniform = row[0] == row[1];
        out.push(uniform as u8);
        write_record(&mut out, &row[0]);
        if !uniform {
            write_record(&mut out, &row[1]);
        }
        for &t in next {
            out.extend_from(&BitString::from_u64(t as u64, w));
        }
    }
    out
}

fn write_record(out: &mut BitString, w: &BitString) {
    write_gamma(out, w.len() as u64 + 1);
    out.extend_from(w);
}

struct Reader<'a> {
    bits: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> Result<u8, FstError> {
        let b = *self.bits.get(self.pos).ok_or(FstError::Truncated { at: self.pos })?;
        self.pos += 1;
        Ok(b)
    }

    fn take(&mut self, n: usize) -> Result<&[u8], FstError> {
        if self.pos + n > self.bits.len() {
            return Err(FstError::Truncated { at: self.bits.len() });
        }
        let s = &self.bits[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn gamma(&mut self) -> Result<u64, FstError> {
        let mut zeros = 0usize;
        while self.bit()? == 0 {
            zeros += 1;
            if zeros > 62 {
                return Err(FstError::Malformed("gamma code too long"));
            }
        }
        let rest = self.take(zeros)?;
        Ok(rest.iter().fold(1u64, |acc, &b| (acc << 1) | b as u64))
    }

    fn record(&mut self) -> Result<BitString, FstError> {
        let len = (self.gamma()? - 1) as usize;
        Ok(BitString::from(self.take(len)?))
    }

    fn index(&mut self, width: usize) -> Result<usize, FstError> {
        Ok(self.take(width)?.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize))
    }
}

/// Decodes `σ_T`, rejecting truncated, trailing or non-canonical input.
pub fn decode(encoded: &BitString) -> Result<Fst, FstError> {
    let mut r = Reader { bits: encoded.as_slice(), pos: 0 };
    let n = r.gamma()? as usize;
    // each state needs at least two bits, so this bounds allocation
    if n > encoded.len() {
        return Err(FstError::Truncated { at: encoded.len() });
    }
    let w = index_width(n);
    let mut next = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let uniform = r.bit()? == 1;
        let w0 = r.record()?;
        let w1 = if uniform {
            w0.clone()
        } else {
            let w1 = r.record()?;
            if w1 == w0 {
                return Err(FstError::Malformed("split state with identical outputs"));
            }
            w1
        };
        let t0 = r.index(w)?;
        let t1 = r.index(w)?;
        next.push([t0, t1]);
        out.push([w0, w1]);
    }
    if r.pos != encoded.len() {
        return Err(FstError::TrailingBits { extra: encoded.len() - r.pos });
    }
    Fst::from_canonical(next, out)
}

/// Byte form used on disk: version byte, bit length as a LEB128 varint, then
/// the packed bits.
pub fn encode_persisted(m: &Fst) -> Vec<u8> {
    let bits = encode(m);
    let mut bytes = vec![ENCODING_VERSION];
    let mut len = bits.len();
    loop {
        let byte = (len & 0x7f) as u8;
        len >>= 7;
        if len == 0 {
            bytes.push(byte);
            break;
        }
        bytes.push(byte | 0x80);
    }
    bytes.extend(bits.to_bytes_msb());
    bytes
}

pub fn decode_persisted(bytes: &[u8]) -> Result<Fst, FstError> {
    let (&version, rest) = bytes.split_first().ok_or(FstError::Truncated { at: 0 })?;
    if version != ENCODING_VERSION {
        return Err(FstError::VersionMismatch { found: version, expected: ENCODING_VERSION });
    }
    let mut len = 0usize;
    let mut shift = 0;
    let mut consumed = 0;
    for &byte in rest {
        consumed += 1;
        len |= ((byte & 0x7f) as usize) << shift;
        if byte & 0x80 == 0 {
            break;
        }
        shift += 7;
        if shift > 56 {
            return Err(FstError::Malformed("length varint too long"));
        }
    }
    let packed = &rest[consumed..];
    if packed.len() != len.div_ceil(8) {
        return Err(FstError::Truncated { at: packed.len() * 8 });
    }
    let mut bits = BitString::from_bytes_msb(packed);
    bits.truncate(len);
    decode(&bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::fst::library;

    #[test]
    fn gamma_codes() {
        let mut b = BitString::new();
        write_gamma(&mut b, 1);
        assert_eq!(b, bits("1"));
        let mut b = BitString::new();
        write_gamma(&mut b, 5);
        assert_eq!(b, bits("00101"));
        assert_eq!(gamma_len(5), 5);
        assert_eq!(gamma_len(8), 7);
    }

    #[test]
    fn identity_layout_is_bit_exact() {
        // gamma(1) | split | gamma(2) 0 | gamma(2) 1
        assert_eq!(encode(&library::identity()), bits("1001000101"));
        assert_eq!(library::identity().size(), 10);
        assert_eq!(library::silent().size(), 3);
    }

    #[test]
    fn two_state_layout() {
        let m = library::delay();
        let e = encode(&m);
        assert_eq!(e.len(), encoded_size(&m));
        // gamma(3) = 011, two-bit indices
        assert_eq!(e.slice(0, 3), bits("011"));
        assert_eq!(decode(&e).unwrap(), m);
    }

    #[test]
    fn constant_machine_size_oracle() {
        // independent: 1 (gamma(1)) + 1 (flag) + 2*floor(log2(L+1)) + 1 + L
        for len in 1..=16usize {
            let r = BitString::from_u64(0b1011_0110_1101_0011 >> (16 - len), len);
            let expected = 3 + 2 * ((len + 1) as f64).log2().floor() as usize + len;
            assert_eq!(library::constant(&r).size(), expected, "len {len}");
            assert_eq!(constant_machine_size(len), expected);
        }
    }

    #[test]
    fn decode_errors() {
        assert!(matches!(decode(&BitString::new()), Err(FstError::Truncated { .. })));
        let mut e = encode(&library::identity());
        e.push(0);
        assert_eq!(decode(&e), Err(FstError::TrailingBits { extra: 1 }));
        let e = encode(&library::identity());
        assert!(matches!(decode(&e.prefix(e.len() - 1)), Err(FstError::Truncated { .. })));
        // split flag with identical records "0","0"
        assert!(matches!(decode(&bits("1001000100")), Err(FstError::Malformed(_))));
    }

    #[test]
    fn decode_rejects_non_bfs_numbering() {
        // 3 states: 0 -> (0, 2), 1 -> (0, 0), 2 -> (1, 0); canonical would number 2 before 1
        let mut e = BitString::new();
        write_gamma(&mut e, 3);
        for next in [[0u64, 2], [0, 0], [1, 0]] {
            e.push(1);
            e.push(1); // empty record
            for t in next {
                e.extend_from(&BitString::from_u64(t, 2));
            }
        }
        assert_eq!(decode(&e), Err(FstError::NotBfsOrdered));
    }

    #[test]
    fn persisted_round_trip_and_version_check() {
        let m = library::delay();
        let bytes = encode_persisted(&m);
        assert_eq!(bytes[0], ENCODING_VERSION);
        assert_eq!(decode_persisted(&bytes).unwrap(), m);
        let mut bad = bytes.clone();
        bad[0] = ENCODING_VERSION + 1;
        assert!(matches!(decode_persisted(&bad), Err(FstError::VersionMismatch { .. })));
    }
}
