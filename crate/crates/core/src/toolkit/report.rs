//! Tabular reports written as CSV with a commented header, or as JSON with
//! the same columns and cells.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::fst::codec::ENCODING_VERSION;

use super::config::{Format, RunConfig};

/// Bumped whenever a command's columns change.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub encoding_version: u8,
    pub config: RunConfig,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: BTreeMap<String, String>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, columns: &[&str]) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            encoding_version: ENCODING_VERSION,
            config: config.clone(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn summarize(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.summary.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width for {}", self.command);
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut head = String::new();
        head.push_str(&format!("# fsdepth report v{}\n", self.schema_version));
        head.push_str(&format!("# command: {}\n", self.command));
        head.push_str(&format!("# encoding_version: {}\n", self.encoding_version));
        head.push_str(&format!("# config: {}\n", serde_json::to_string(&self.config).expect("config serializes")));
        for (k, v) in &self.parameters {
            head.push_str(&format!("# param {k}: {v}\n"));
        }
        for (k, v) in &self.summary {
            head.push_str(&format!("# summary {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        head.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells"));
        head
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Float cells with a fixed precision so reruns diff cleanly.
pub fn cell_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else if v > 0.0 {
        "inf".into()
    } else if v < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

pub fn cell_opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &RunConfig::default(), &["n", "note"]);
        r.param("input", "zeros").summarize("rows", 2);
        r.row(vec!["1".into(), "plain".into()]);
        r.row(vec!["2".into(), "has, comma".into()]);
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# fsdepth report v1");
        assert_eq!(lines[2], "# encoding_version: 1");
        assert!(lines[3].starts_with("# config: {"));
        assert!(lines[3].contains("\"scale_pack\""));
        assert_eq!(&lines[lines.len() - 3..], ["n,note", "1,plain", "2,\"has, comma\""]);
    }

    #[test]
    fn json_mirrors_csv() {
        let r = sample();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["columns"], serde_json::json!(["n", "note"]));
        assert_eq!(v["rows"][1][1], "has, comma");
        assert_eq!(v["encoding_version"], 1);
        assert_eq!(v["config"]["scale_pack"]["factor"], 12);
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(sample().to_csv(), sample().to_csv());
        assert_eq!(sample().to_json(), sample().to_json());
    }

    #[test]
    fn float_cells() {
        assert_eq!(cell_f64(0.5), "0.500000");
        assert_eq!(cell_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(cell_f64(f64::INFINITY), "inf");
    }
}
