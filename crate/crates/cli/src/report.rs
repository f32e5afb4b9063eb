//! Versioned JSON reports with CSV mirrors of their tables.
//!
//! Everything except `timing` is a function of the config, so two runs with
//! the same config give identical files once that field is dropped.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use shintani_core::twist::Check;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    /// Filename suffix.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub command: String,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub data: Value,
    pub timing: Timing,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, checks: Vec<Check>, data: Value, tables: Vec<Table>, seconds: f64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            data,
            timing: Timing { seconds },
            tables,
        }
    }

    /// `{command}-{family}{n}-q{q}-r{r}`
    pub fn stem(&self) -> String {
        let c = &self.config;
        format!("{}-{}{}-q{}-r{}", self.command, c.family, c.n, c.q(), c.r)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Write the JSON report and one CSV per table under `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stem = self.stem();
        let json = dir.join(format!("{stem}.json"));
        std::fs::write(&json, self.to_json()?).with_context(|| format!("writing {}", json.display()))?;
        let mut paths = vec![json];
        for t in &self.tables {
            let path = dir.join(format!("{stem}-{}.csv", t.name));
            std::fs::write(&path, t.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Report text with the `timing` field removed.
pub fn strip_timing(json: &str) -> Result<String> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Value::Object(map) = &mut v {
        map.remove("timing");
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_awkward_cells() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push(vec!["1".into(), "p,q".into()]);
        t.push(vec!["say \"hi\"".into(), "".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,\"p,q\"\n\"say \"\"hi\"\"\",\n");
    }

    #[test]
    fn timing_does_not_affect_stripped_text() {
        let cfg = RunConfig::default();
        let a = Report::new("twist", &cfg, vec![], Value::Null, vec![], 1.0);
        let b = Report::new("twist", &cfg, vec![], Value::Null, vec![], 2.5);
        assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(strip_timing(&a.to_json().unwrap()).unwrap(), strip_timing(&b.to_json().unwrap()).unwrap());
        assert_eq!(a.stem(), "twist-sl2-q3-r2");
    }
}
