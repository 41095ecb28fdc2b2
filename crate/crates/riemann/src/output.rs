//! Artifacts: a JSON document and a CSV table, both carrying the version and
//! the full run configuration.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Rows of a CSV table; cells are already formatted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip formatting, so CSV and JSON carry identical values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Formats each element with [`num`] or `to_string`.
#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => {
        vec![$($crate::output::Cell::cell(&$v)),*]
    };
}

pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        num(*self)
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {
        $(impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        })*
    };
}

display_cell!(u64, i64, usize, u32, bool, String, &str);

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub result: Value,
    pub table: Table,
}

impl Artifact {
    pub fn new(result: impl Serialize, table: Table) -> Result<Self, CliError> {
        Ok(Self {
            result: serde_json::to_value(result)?,
            table,
        })
    }

    /// The artifact in the configured format.
    pub fn render(&self, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
        match cfg.format {
            Format::Json => {
                let doc = json!({
                    "version": riemann_core::VERSION,
                    "config": cfg,
                    "result": self.result,
                });
                let mut out = serde_json::to_vec_pretty(&doc)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut out = Vec::new();
                writeln!(out, "# riemann {}", riemann_core::VERSION)?;
                writeln!(out, "# config {}", serde_json::to_string(cfg)?)?;
                {
                    let mut w = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(&mut out);
                    w.write_record(&self.table.headers)?;
                    for r in &self.table.rows {
                        w.write_record(r)?;
                    }
                    w.flush()?;
                }
                Ok(out)
            }
        }
    }
}

/// Extracts the run configuration echoed by an artifact, or reads a bare
/// configuration.
pub fn config_from_artifact(text: &str) -> Result<RunConfig, CliError> {
    if text.starts_with('#') {
        let line = text
            .lines()
            .find_map(|l| l.strip_prefix("# config "))
            .ok_or_else(|| CliError::Usage("CSV artifact has no `# config` line".into()))?;
        return Ok(serde_json::from_str(line)?);
    }
    let v: Value = serde_json::from_str(text)?;
    match v.get("config") {
        Some(c) => Ok(serde_json::from_value(c.clone())?),
        None => Ok(serde_json::from_value(v)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Command, FareyArgs};

    fn cfg(format: Format) -> RunConfig {
        RunConfig {
            command: Command::Farey(FareyArgs { q_min: 2, q_max: 3 }),
            format,
            output: None,
            seed: 0,
        }
    }

    #[test]
    fn csv_has_header_lines_and_lf_endings() {
        let mut t = Table::new(&["p", "q"]);
        t.push(row![1u64, 2u64]);
        t.push(row![0.5f64, "a,b"]);
        let a = Artifact::new(json!({}), t).unwrap();
        let text = String::from_utf8(a.render(&cfg(Format::Csv)).unwrap()).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], format!("# riemann {}", riemann_core::VERSION));
        assert!(lines[1].starts_with("# config {"));
        assert_eq!(&lines[2..], ["p,q", "1,2", "0.5,\"a,b\"", ""]);
        assert!(!text.contains('\r'));
        assert_eq!(config_from_artifact(&text).unwrap(), cfg(Format::Csv));
    }

    #[test]
    fn json_echoes_config() {
        let a = Artifact::new(json!({"x": 1.0}), Table::default()).unwrap();
        let text = String::from_utf8(a.render(&cfg(Format::Json)).unwrap()).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["version"], riemann_core::VERSION);
        assert_eq!(v["result"]["x"], 1.0);
        assert_eq!(config_from_artifact(&text).unwrap(), cfg(Format::Json));
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
