//! The standard enumeration `s_0 = λ, s_1 = 0, s_2 = 1, s_3 = 00, …`.

use crate::bits::BitString;

/// `s_n`: the binary expansion of `n + 1` without its leading 1.
pub fn string_at(n: u64) -> BitString {
    let v = n + 1;
    let width = 63 - v.leading_zeros() as usize;
    BitString::from_u64(v & !(1u64 << width), width)
}

/// Inverse of [`string_at`]. Panics for strings of 64 bits or more.
pub fn index_of(x: &BitString) -> u64 {
    assert!(x.len() < 64, "index of a {}-bit string does not fit", x.len());
    ((1u64 << x.len()) - 1) + x.to_u64()
}

/// `s_start, s_{start+1}, …` up to but excluding `s_end`.
pub fn strings_between(start: u64, end: u64) -> impl Iterator<Item = (u64, BitString)> {
    (start..end).map(|n| (n, string_at(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn first_strings() {
        let firsts: Vec<String> = (0..7).map(|n| string_at(n).to_string()).collect();
        assert_eq!(string_at(0), BitString::new());
        assert_eq!(string_at(3), bits("00"));
        assert_eq!(firsts[1..], ["0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn bijection_below_4096() {
        for n in 0..4096 {
            assert_eq!(index_of(&string_at(n)), n);
        }
    }

    #[test]
    fn order_matches_bitstring_order() {
        for n in 1..2048 {
            assert!(string_at(n - 1) < string_at(n));
        }
    }
}
