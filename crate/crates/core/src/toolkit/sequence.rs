//! Deterministic test sequences.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::fs::deepgen::{deep_prefix, ScalePack};
use crate::fs::Engine;

use super::ToolkitError;

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceSpec {
    Zeros,
    Ones,
    Alternating,
    /// Binary expansions of 1, 2, 3, … written one after another.
    Champernowne,
    ThueMorse,
    Prng(u64),
    /// Bytes read most significant bit first.
    File(PathBuf),
    /// The staged deep sequence for the run's scale pack.
    Deepgen,
}

impl FromStr for SequenceSpec {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let spec = match (kind, arg) {
            ("zeros", None) => SequenceSpec::Zeros,
            ("ones", None) => SequenceSpec::Ones,
            ("alternating", None) => SequenceSpec::Alternating,
            ("champernowne", None) => SequenceSpec::Champernowne,
            ("thue-morse", None) => SequenceSpec::ThueMorse,
            ("deepgen", None) => SequenceSpec::Deepgen,
            ("prng", Some(seed)) => {
                SequenceSpec::Prng(seed.parse().map_err(|_| ToolkitError::Usage(format!("bad prng seed {seed:?}")))?)
            }
            ("file", Some(path)) if !path.is_empty() => SequenceSpec::File(PathBuf::from(path)),
            _ => return Err(ToolkitError::Usage(format!("unknown input {s:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Zeros => write!(f, "zeros"),
            SequenceSpec::Ones => write!(f, "ones"),
            SequenceSpec::Alternating => write!(f, "alternating"),
            SequenceSpec::Champernowne => write!(f, "champernowne"),
            SequenceSpec::ThueMorse => write!(f, "thue-morse"),
            SequenceSpec::Prng(seed) => write!(f, "prng:{seed}"),
            SequenceSpec::File(p) => write!(f, "file:{}", p.display()),
            SequenceSpec::Deepgen => write!(f, "deepgen"),
        }
    }
}

fn champernowne(n: usize) -> BitString {
    let mut s = BitString::with_capacity(n + 64);
    let mut i = 1u64;
    while s.len() < n {
        s.extend_from(&BitString::from_u64(i, 64 - i.leading_zeros() as usize));
        i += 1;
    }
    s.truncate(n);
    s
}

/// The first `n` bits. `pack` and `engine` are only used by `deepgen`.
pub fn generate(spec: &SequenceSpec, n: usize, pack: &ScalePack, engine: &Engine) -> Result<BitString, ToolkitError> {
    let s = match spec {
        SequenceSpec::Zeros => BitString::zeros(n),
        SequenceSpec::Ones => BitString::from_bits(vec![1; n]),
        SequenceSpec::Alternating => (0..n).map(|i| (i % 2) as u8).collect::<Vec<_>>().as_slice().into(),
        SequenceSpec::Champernowne => champernowne(n),
        SequenceSpec::ThueMorse => (0..n).map(|i| (i.count_ones() % 2) as u8).collect::<Vec<_>>().as_slice().into(),
        SequenceSpec::Prng(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut bytes = vec![0u8; n.div_ceil(8)];
            rng.fill_bytes(&mut bytes);
            BitString::from_bytes_msb(&bytes).prefix(n)
        }
        SequenceSpec::File(path) => {
            let bytes = std::fs::read(path).map_err(|e| ToolkitError::Input(format!("{}: {e}", path.display())))?;
            let bits = BitString::from_bytes_msb(&bytes);
            if bits.len() < n {
                return Err(ToolkitError::Input(format!("{} holds {} bits, {n} requested", path.display(), bits.len())));
            }
            bits.prefix(n)
        }
        SequenceSpec::Deepgen => deep_prefix(pack, engine, n)?,
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn gen(spec: &str, n: usize) -> BitString {
        generate(&spec.parse().unwrap(), n, &ScalePack::default(), &Engine::new(None, 1)).unwrap()
    }

    #[test]
    fn small_prefixes() {
        assert_eq!(gen("zeros", 5), bits("00000"));
        assert_eq!(gen("ones", 3), bits("111"));
        assert_eq!(gen("alternating", 5), bits("01010"));
        assert_eq!(gen("champernowne", 6), bits("110111"));
        assert_eq!(gen("champernowne", 14), bits("11011100101110"));
        assert_eq!(gen("thue-morse", 8), bits("01101001"));
    }

    #[test]
    fn thue_morse_is_a_doubling_fixpoint() {
        let t = gen("thue-morse", 4096);
        for i in 0..2048 {
            assert_eq!(t.bit(2 * i), t.bit(i));
            assert_eq!(t.bit(2 * i + 1), 1 - t.bit(i));
        }
    }

    #[test]
    fn champernowne_reads_back_the_integers() {
        let c = gen("champernowne", 4096);
        let mut pos = 0;
        let mut i = 1u64;
        while pos < c.len() {
            for b in format!("{i:b}").bytes() {
                if pos == c.len() {
                    break;
                }
                assert_eq!(c.bit(pos), b - b'0');
                pos += 1;
            }
            i += 1;
        }
    }

    #[test]
    fn prng_is_seeded_and_prefix_stable() {
        assert_eq!(gen("prng:7", 100), gen("prng:7", 300).prefix(100));
        assert_ne!(gen("prng:7", 64), gen("prng:8", 64));
    }

    #[test]
    fn files_read_msb_first() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("in.bin");
        std::fs::write(&path, [0b1000_0001u8, 0xff]).unwrap();
        let spec = SequenceSpec::File(path.clone());
        let engine = Engine::new(None, 1);
        let s = generate(&spec, 12, &ScalePack::default(), &engine).unwrap();
        assert_eq!(s, bits("100000011111"));
        assert!(matches!(generate(&spec, 17, &ScalePack::default(), &engine), Err(ToolkitError::Input(_))));
    }

    #[test]
    fn spec_round_trips() {
        for s in ["zeros", "ones", "alternating", "champernowne", "thue-morse", "prng:42", "file:/tmp/x", "deepgen"] {
            assert_eq!(s.parse::<SequenceSpec>().unwrap().to_string(), s);
        }
        assert!("prng:x".parse::<SequenceSpec>().is_err());
        assert!("pi".parse::<SequenceSpec>().is_err());
    }
}
