use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{Format, Global};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub config_digest: String,
    pub seed: Option<u64>,
    pub outputs: Value,
}

impl RunReport {
    pub fn new(command: &str, config: Value, seed: Option<u64>, outputs: Value) -> Self {
        let config_digest = sha256_hex(config.to_string().as_bytes());
        RunReport {
            schema: SCHEMA,
            command: command.into(),
            config,
            config_digest,
            seed,
            outputs,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn require_seed(global: &Global, what: &str) -> Result<u64> {
    global
        .seed
        .with_context(|| format!("{what} is randomized and needs --seed"))
}

/// `key,value` rows with nested keys joined by dots.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, rows)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

pub fn key_value_csv(value: &Value) -> Result<String> {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["key", "value"])?;
    for (k, v) in rows {
        out.write_record([k, v])?;
    }
    Ok(String::from_utf8(out.into_inner()?)?)
}

/// Writes to `--out` when given and not already used for another artifact.
pub fn emit(global: &Global, text: &str, to_stdout: bool) -> Result<()> {
    match (&global.out, to_stdout) {
        (Some(path), false) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn render(global: &Global, report: &RunReport, default: Format) -> Result<String> {
    Ok(match global.format.unwrap_or(default) {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => key_value_csv(&serde_json::to_value(report)?)?,
    })
}
