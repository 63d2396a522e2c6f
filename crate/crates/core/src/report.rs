//! Deterministic JSON/text reports. Keys are BTreeMaps so serialization
//! order is fixed; `timing_ms` is the only field allowed to differ between
//! runs of the same seeded command and is stripped by determinism checks.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(crate::Error::Parse {
                pos: 0,
                msg: format!("unknown format `{s}` (expected json or text)"),
            }),
        }
    }
}

/// Report of a single computation: echoed inputs, results, and the
/// statement identifier the computation instantiates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub statement: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub results: BTreeMap<String, serde_json::Value>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: &str, statement: &str) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            statement: statement.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            timing_ms: 0,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Report {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable input"),
        );
        self
    }

    pub fn result(mut self, key: &str, value: impl Serialize) -> Report {
        self.results.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable result"),
        );
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "{} [{}]", self.command, self.statement);
                for (k, v) in &self.inputs {
                    let _ = writeln!(out, "  {k} = {v}");
                }
                for (k, v) in &self.results {
                    let _ = writeln!(out, "  {k}: {v}");
                }
                let _ = writeln!(out, "  timing_ms: {}", self.timing_ms);
                out
            }
        }
    }
}

/// One property checked by a verification suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub statement: String,
    pub pass: bool,
    pub detail: String,
}

/// Report of a `verify` run: one entry per property, sorted by name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub command: String,
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub properties: Vec<PropertyResult>,
    pub timing_ms: u128,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, mut properties: Vec<PropertyResult>) -> SuiteReport {
        properties.sort_by(|a, b| a.name.cmp(&b.name));
        SuiteReport {
            schema: SCHEMA,
            command: "verify".to_string(),
            suite: suite.to_string(),
            seed,
            pass: properties.iter().all(|p| p.pass),
            properties,
            timing_ms: 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "verify --suite {} --seed {}", self.suite, self.seed);
                for p in &self.properties {
                    let _ = writeln!(
                        out,
                        "  [{}] {} [{}]{}",
                        if p.pass { "pass" } else { "FAIL" },
                        p.name,
                        p.statement,
                        if p.detail.is_empty() {
                            String::new()
                        } else {
                            format!(" — {}", p.detail)
                        }
                    );
                }
                let _ = writeln!(
                    out,
                    "{} ({} properties, timing_ms: {})",
                    if self.pass { "PASS" } else { "FAIL" },
                    self.properties.len(),
                    self.timing_ms
                );
                out
            }
        }
    }
}

/// Strips the timing line so byte comparisons see only deterministic
/// content.
pub fn strip_timing(rendered: &str) -> String {
    rendered
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timing_ms\"") && !l.trim_start().starts_with("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_modulo_timing() {
        let mk = |ms| {
            let mut r = Report::new("asw", "eq:ASW")
                .input("field", "GF(4)")
                .input("r", 1)
                .result("invariants", vec![2]);
            r.timing_ms = ms;
            r.render(Format::Json)
        };
        let a = mk(3);
        let b = mk(99);
        assert_ne!(a, b);
        assert_eq!(strip_timing(&a), strip_timing(&b));
        // keys are sorted regardless of insertion order
        let r = Report::new("x", "s").input("zz", 1).input("aa", 2);
        let json = r.render(Format::Json);
        assert!(json.find("\"aa\"").unwrap() < json.find("\"zz\"").unwrap());
    }

    #[test]
    fn suite_report_sorts_and_aggregates() {
        let props = vec![
            PropertyResult {
                name: "b-prop".into(),
                statement: "thm:bij".into(),
                pass: true,
                detail: String::new(),
            },
            PropertyResult {
                name: "a-prop".into(),
                statement: "eq:ASW".into(),
                pass: false,
                detail: "counterexample at seed 3".into(),
            },
        ];
        let r = SuiteReport::new("asw", 42, props);
        assert!(!r.pass);
        assert_eq!(r.properties[0].name, "a-prop");
        let text = r.render(Format::Text);
        assert!(text.contains("FAIL"));
        assert!(text.contains("eq:ASW"));
    }
}
