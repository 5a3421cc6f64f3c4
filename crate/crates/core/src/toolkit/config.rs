//! Validated run configuration, embedded in every report.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fs::deepgen::ScalePack;
use crate::fst::enumerate::count_machines;

use super::ToolkitError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ToolkitError::Usage(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

/// Machines enumerated per budget before a run is refused.
pub const DEFAULT_BUDGET_CEILING: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kmin: usize,
    pub kmax: usize,
    pub ngrid: Vec<usize>,
    pub lmax: Option<usize>,
    /// 0 lets the pool pick.
    pub workers: usize,
    pub cache: Option<PathBuf>,
    pub scale_pack: ScalePack,
    pub format: Format,
    pub budget_ceiling: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kmin: 10,
            kmax: 12,
            ngrid: vec![8, 16, 32, 64],
            lmax: None,
            workers: 0,
            cache: None,
            scale_pack: ScalePack::default(),
            format: Format::Csv,
            budget_ceiling: DEFAULT_BUDGET_CEILING,
        }
    }
}

impl RunConfig {
    pub fn ks(&self) -> Vec<usize> {
        (self.kmin..=self.kmax).collect()
    }

    pub fn max_n(&self) -> usize {
        self.ngrid.iter().copied().max().unwrap_or(0)
    }

    /// Checks shape and the budget of `kmax`.
    pub fn validate(&self) -> Result<(), ToolkitError> {
        if self.kmin > self.kmax {
            return Err(ToolkitError::Usage(format!("kmin {} exceeds kmax {}", self.kmin, self.kmax)));
        }
        if self.ngrid.is_empty() {
            return Err(ToolkitError::Usage("empty n grid".into()));
        }
        if self.lmax == Some(0) {
            return Err(ToolkitError::Usage("lmax must be positive".into()));
        }
        self.scale_pack.validate()?;
        self.check_budget(self.kmax)?;
        Ok(())
    }

    /// Refuses budgets whose enumeration exceeds the ceiling, returning the
    /// machine count otherwise.
    pub fn check_budget(&self, k: usize) -> Result<u64, ToolkitError> {
        let estimate = count_machines(k, self.lmax);
        if estimate > self.budget_ceiling {
            return Err(ToolkitError::Budget { k, estimate, ceiling: self.budget_ceiling });
        }
        Ok(estimate)
    }
}

/// `32`, `8,16,32`, `1..64` (inclusive), `8..512:8` (with step) or
/// `pow2:3..9` (`2^3 … 2^9`). The result is sorted and deduplicated.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, ToolkitError> {
    let bad = || ToolkitError::Usage(format!("bad grid {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = |t: &str| -> Result<(usize, usize), ToolkitError> {
        let (a, b) = t.split_once("..").ok_or_else(bad)?;
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        Ok((a, b))
    };
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some(rest) = part.strip_prefix("pow2:") {
            let (a, b) = range(rest)?;
            if b >= usize::BITS as usize {
                return Err(bad());
            }
            out.extend((a..=b).map(|e| 1usize << e));
        } else if part.contains("..") {
            let (r, step) = match part.split_once(':') {
                Some((r, st)) => (r, num(st)?),
                None => (part, 1),
            };
            if step == 0 {
                return Err(bad());
            }
            let (a, b) = range(r)?;
            out.extend((a..=b).step_by(step));
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("32").unwrap(), vec![32]);
        assert_eq!(parse_grid("16, 8,16").unwrap(), vec![8, 16]);
        assert_eq!(parse_grid("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_grid("1..=4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_grid("8..32:8").unwrap(), vec![8, 16, 24, 32]);
        assert_eq!(parse_grid("pow2:3..5,7").unwrap(), vec![7, 8, 16, 32]);
        for bad in ["", "x", "4..1", "1..4:0", "pow2:1..99"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn budget_guardrail() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.kmax = 40;
        let err = c.validate().unwrap_err();
        assert_eq!(err.exit_code(), 3);
        c.lmax = Some(1);
        c.kmax = 16;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn shape_errors_are_usage_errors() {
        let c = RunConfig { kmin: 12, kmax: 10, ..RunConfig::default() };
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
        let c = RunConfig { ngrid: vec![], ..RunConfig::default() };
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn serde_round_trip() {
        let c = RunConfig { cache: Some("/tmp/c".into()), lmax: Some(3), ..RunConfig::default() };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }
}
