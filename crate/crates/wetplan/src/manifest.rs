//! Run manifest: a flat `key = value` text file.
//!
//! ```text
//! version = 0.1.0
//! subcommand = outage
//! seed = 0
//! duration_s = 1.25
//! override.0 = pathloss.exponent=3
//! config.pathloss.exponent = 3.0
//! output.outage.csv = sha256:5f0c...
//! ```
//!
//! `config.*` values are TOML values; together they are the fully expanded
//! configuration, so a run can be repeated from the manifest alone.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::config::{self, Experiment};
use crate::error::{Error, Result};

pub const FILE_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub version: String,
    pub experiment: Experiment,
    pub seed: u64,
    pub duration_s: f64,
    pub overrides: Vec<String>,
    pub config: Table,
    /// `(file name, hex sha256)` pairs.
    pub outputs: Vec<(String, String)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}

fn flatten(prefix: &str, table: &Table, out: &mut String) {
    for (k, v) in table {
        let key = format!("{prefix}.{k}");
        match v {
            Value::Table(t) => flatten(&key, t, out),
            v => writeln!(out, "{key} = {v}").unwrap(),
        }
    }
}

fn insert(table: &mut Table, path: &[&str], value: Value) -> Result<()> {
    match path {
        [] => Err(Error::Manifest("empty config key".into())),
        [last] => {
            table.insert((*last).to_string(), value);
            Ok(())
        }
        [head, rest @ ..] => {
            let entry = table
                .entry((*head).to_string())
                .or_insert_with(|| Value::Table(Table::new()));
            match entry {
                Value::Table(t) => insert(t, rest, value),
                _ => Err(Error::Manifest(format!(
                    "config key `{head}` is both a value and a table"
                ))),
            }
        }
    }
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "version = {}", self.version).unwrap();
        writeln!(out, "subcommand = {}", self.experiment).unwrap();
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "duration_s = {:.6}", self.duration_s).unwrap();
        for (i, o) in self.overrides.iter().enumerate() {
            writeln!(out, "override.{i} = {o}").unwrap();
        }
        flatten("config", &self.config, &mut out);
        for (name, digest) in &self.outputs {
            writeln!(out, "output.{name} = sha256:{digest}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let mut version = None;
        let mut experiment = None;
        let mut seed = None;
        let mut duration_s = 0.0;
        let mut overrides = Vec::new();
        let mut config = Table::new();
        let mut outputs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Manifest(format!("line {}: {what}", n + 1));
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| bad("expected `key = value`"))?;
            match key {
                "version" => version = Some(value.to_string()),
                "subcommand" => experiment = Some(value.parse::<Experiment>()?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed is not a u64"))?),
                "duration_s" => duration_s = value.parse().map_err(|_| bad("bad duration"))?,
                _ if key.starts_with("override.") => overrides.push(value.to_string()),
                _ if key.starts_with("config.") => {
                    let v = config::parse_value(value)
                        .ok_or_else(|| bad("config value is not TOML"))?;
                    let path: Vec<&str> = key["config.".len()..].split('.').collect();
                    insert(&mut config, &path, v)?;
                }
                _ if key.starts_with("output.") => {
                    let digest = value
                        .strip_prefix("sha256:")
                        .ok_or_else(|| bad("digest must start with `sha256:`"))?;
                    outputs.push((key["output.".len()..].to_string(), digest.to_string()));
                }
                _ => return Err(bad(&format!("unknown key `{key}`"))),
            }
        }
        Ok(Manifest {
            version: version.ok_or_else(|| Error::Manifest("missing `version`".into()))?,
            experiment: experiment.ok_or_else(|| Error::Manifest("missing `subcommand`".into()))?,
            seed: seed.ok_or_else(|| Error::Manifest("missing `seed`".into()))?,
            duration_s,
            overrides,
            config,
            outputs,
        })
    }
}
