//! Persistent memo of `D^k` values.
//!
//! Text format, one record per line after a two-line header:
//!
//! ```text
//! # fsdepth complexity cache
//! version 1 lmax none
//! <k> <|x|> <x> <value> <machine> <program>
//! ```
//!
//! Empty strings are written as `-`; `value` is an integer or `inf`, and the
//! witness fields are `-` when the value is infinite. Records may repeat
//! (appends), later copies must agree with earlier ones.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::bits::BitString;
use crate::fst::codec::ENCODING_VERSION;

use super::engine::{ComplexityTable, ComplexityValue, Engine, Value, Witness};

const MAGIC: &str = "# fsdepth complexity cache";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache written with encoding version {found} and lmax {found_lmax}, expected {expected} and {expected_lmax}")]
    Incompatible { found: u8, found_lmax: String, expected: u8, expected_lmax: String },
    #[error("cache line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("conflicting values for k={k}, x={x}: {a} vs {b}")]
    Conflict { k: usize, x: BitString, a: Value, b: Value },
}

/// A value that grew when the budget grew.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub x: BitString,
    pub k: usize,
    pub k_larger: usize,
    pub value: Value,
    pub value_larger: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityCache {
    lmax: Option<usize>,
    entries: BTreeMap<(usize, BitString), ComplexityValue>,
}

fn lmax_text(lmax: Option<usize>) -> String {
    lmax.map_or_else(|| "none".to_string(), |l| l.to_string())
}

fn bits_text(b: &BitString) -> String {
    if b.is_empty() {
        "-".to_string()
    } else {
        b.to_string()
    }
}

impl ComplexityCache {
    pub fn new(lmax: Option<usize>) -> Self {
        ComplexityCache { lmax, entries: BTreeMap::new() }
    }

    pub fn lmax(&self) -> Option<usize> {
        self.lmax
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: usize, x: &BitString) -> Option<&ComplexityValue> {
        self.entries.get(&(k, x.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &BitString, &ComplexityValue)> {
        self.entries.iter().map(|((k, x), v)| (*k, x, v))
    }

    pub fn insert(&mut self, k: usize, x: BitString, v: ComplexityValue) -> Result<(), CacheError> {
        if let Some(old) = self.entries.get(&(k, x.clone())) {
            if old.value != v.value {
                return Err(CacheError::Conflict { k, x, a: old.value, b: v.value });
            }
            return Ok(());
        }
        self.entries.insert((k, x), v);
        Ok(())
    }

    /// Union of two caches. Commutative and idempotent: overlapping keys
    /// must agree, and the witness from `self` is kept.
    pub fn merge(&mut self, other: &ComplexityCache) -> Result<(), CacheError> {
        if self.lmax != other.lmax {
            return Err(CacheError::Incompatible {
                found: ENCODING_VERSION,
                found_lmax: lmax_text(other.lmax),
                expected: ENCODING_VERSION,
                expected_lmax: lmax_text(self.lmax),
            });
        }
        for ((k, x), v) in &other.entries {
            self.insert(*k, x.clone(), v.clone())?;
        }
        Ok(())
    }

    /// Stores `D^k(x)` with witness for every target of `table` and every
    /// budget in `ks`.
    pub fn record_table(&mut self, engine: &Engine, table: &ComplexityTable, ks: &[usize]) -> Result<(), CacheError> {
        for &k in ks {
            for x in table.targets() {
                if self.get(k, x).is_none() {
                    let v = table.complexity(engine, k, x);
                    self.insert(k, x.clone(), v)?;
                }
            }
        }
        Ok(())
    }

    /// Pairs `(x, k < k′)` where the cached value at `k′` exceeds the one
    /// at `k`.
    pub fn monotonicity_violations(&self) -> Vec<MonotonicityViolation> {
        let mut by_x: BTreeMap<&BitString, Vec<(usize, Value)>> = BTreeMap::new();
        for ((k, x), v) in &self.entries {
            by_x.entry(x).or_default().push((*k, v.value));
        }
        let mut out = Vec::new();
        for (x, mut vals) in by_x {
            vals.sort();
            for pair in vals.windows(2) {
                let ((k, a), (k2, b)) = (pair[0], pair[1]);
                if b > a {
                    out.push(MonotonicityViolation { x: x.clone(), k, k_larger: k2, value: a, value_larger: b });
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC}\nversion {ENCODING_VERSION} lmax {}\n", lmax_text(self.lmax));
        for ((k, x), v) in &self.entries {
            s.push_str(&record_line(*k, x, v));
        }
        s
    }

    /// Parses a cache file, refusing any header other than the current
    /// encoding version with the given `lmax`.
    pub fn from_text(text: &str, lmax: Option<usize>) -> Result<Self, CacheError> {
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, message: &str| CacheError::Parse { line: line + 1, message: message.to_string() };
        match lines.next() {
            Some((_, l)) if l == MAGIC => {}
            _ => return Err(parse_err(0, "missing cache header")),
        }
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing version line"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [ "version", v, "lmax", l ] = fields.as_slice() else {
            return Err(parse_err(hl, "malformed version line"));
        };
        let version: u8 = v.parse().map_err(|_| parse_err(hl, "bad version"))?;
        if version != ENCODING_VERSION || *l != lmax_text(lmax) {
            return Err(CacheError::Incompatible {
                found: version,
                found_lmax: l.to_string(),
                expected: ENCODING_VERSION,
                expected_lmax: lmax_text(lmax),
            });
        }
        let mut cache = ComplexityCache::new(lmax);
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (k, x, v) = parse_record(line).map_err(|m| parse_err(i, &m))?;
            cache.insert(k, x, v)?;
        }
        Ok(cache)
    }

    /// Loads `path`, or starts empty if it does not exist.
    pub fn open(path: &Path, lmax: Option<usize>) -> Result<Self, CacheError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::from_text(&text, lmax),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new(lmax)),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes the whole cache, sorted and deduplicated, via a temporary file
    /// renamed into place.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Merges with whatever is on disk now, then saves. Concurrent writers
    /// that commit in turn end up with the union.
    pub fn commit(&self, path: &Path) -> Result<(), CacheError> {
        let mut on_disk = Self::open(path, self.lmax)?;
        on_disk.merge(self)?;
        on_disk.save(path)
    }

    /// Appends records without rewriting; a later [`compact`] folds duplicates.
    pub fn append(path: &Path, lmax: Option<usize>, records: &ComplexityCache) -> Result<(), CacheError> {
        if !path.exists() {
            return records.save(path);
        }
        Self::open(path, lmax)?;
        let mut f = fs::OpenOptions::new().append(true).open(path)?;
        for ((k, x), v) in &records.entries {
            f.write_all(record_line(*k, x, v).as_bytes())?;
        }
        Ok(())
    }
}

/// Rewrites a cache file without duplicate records.
pub fn compact(path: &Path, lmax: Option<usize>) -> Result<ComplexityCache, CacheError> {
    let cache = ComplexityCache::open(path, lmax)?;
    cache.save(path)?;
    Ok(cache)
}

fn record_line(k: usize, x: &BitString, v: &ComplexityValue) -> String {
    let (m, p) = match &v.witness {
        Some(w) => (bits_text(&w.machine), bits_text(&w.program)),
        None => ("-".to_string(), "-".to_string()),
    };
    format!("{k} {} {} {} {m} {p}\n", x.len(), bits_text(x), v.value)
}

fn parse_record(line: &str) -> Result<(usize, BitString, ComplexityValue), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 6 {
        return Err(format!("expected 6 fields, found {}", f.len()));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let bits = |s: &str| s.parse::<BitString>().map_err(|e| e.to_string());
    let k = num(f[0])?;
    let len = num(f[1])?;
    let x = bits(f[2])?;
    if x.len() != len {
        return Err(format!("length prefix {len} does not match {} bits", x.len()));
    }
    let value: Value = f[3].parse().map_err(|_| format!("bad value {:?}", f[3]))?;
    let witness = match value {
        Value::Infinite => None,
        Value::Finite(_) => Some(Witness { machine: bits(f[4])?, program: bits(f[5])? }),
    };
    Ok((k, x, ComplexityValue { value, witness }))
}
