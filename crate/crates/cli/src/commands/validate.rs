use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use galedim::bits::strings_of_length;
use galedim::fsg::{induced_gale, FsgSpec};
use galedim::gale::{kraft_sum, validate, GaleSpec, SGale, ValidationReport};
use galedim::predictor::{check_predictor, to_martingale, PredictorSpec};
use galedim::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::report::{emit, render, sha256_hex, Outcome, RunReport};
use crate::{Format, Global};

const DEFAULT_DEPTH: usize = 8;
/// Prefix sets for the Kraft check are all strings of one length up to this.
const MAX_KRAFT_LENGTH: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Gale,
    Fsg,
    Predictor,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    pub file: PathBuf,
    /// Inferred from the JSON keys when absent.
    #[arg(long, value_enum)]
    pub kind: Option<ObjectKind>,
}

fn infer_kind(value: &Value) -> Result<ObjectKind> {
    let has = |key: &str| value.get(key).is_some();
    if has("states") {
        Ok(ObjectKind::Fsg)
    } else if has("rule") {
        Ok(ObjectKind::Gale)
    } else if has("type") {
        Ok(ObjectKind::Predictor)
    } else {
        anyhow::bail!("cannot tell whether this is a gale, gambler or predictor; pass --kind")
    }
}

/// Errors that describe a bad object rather than a bad file.
fn is_check_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::MalformedRule { .. } | Error::Structural(_) | Error::Domain(_)
    )
}

fn gale_checks(g: &SGale, depth: usize, checks: &mut Map<String, Value>) -> galedim::Result<bool> {
    let report = validate(g, depth)?;
    let mut ok = report.passed;
    checks.insert("gale_condition".into(), serde_json::to_value(&report)?);
    let set: Vec<Vec<u8>> = strings_of_length(depth.min(MAX_KRAFT_LENGTH)).collect();
    let kraft = kraft_sum(g, &set, &[])?;
    ok &= kraft.holds;
    checks.insert("kraft".into(), serde_json::to_value(kraft)?);
    Ok(ok)
}

fn record(
    checks: &mut Map<String, Value>,
    name: &str,
    report: &ValidationReport,
) -> galedim::Result<bool> {
    checks.insert(name.into(), serde_json::to_value(report)?);
    Ok(report.passed)
}

pub fn run(global: &Global, args: &ValidateArgs) -> Result<Outcome> {
    let raw = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let value: Value =
        serde_json::from_str(&raw).with_context(|| format!("parsing {}", args.file.display()))?;
    let kind = match args.kind {
        Some(k) => k,
        None => infer_kind(&value)?,
    };
    let depth = global.depth.unwrap_or(DEFAULT_DEPTH);
    let mut checks = Map::new();

    let built: std::result::Result<bool, Error> = (|| {
        Ok(match kind {
            ObjectKind::Gale => {
                let spec: GaleSpec = serde_json::from_value(value.clone())?;
                let g = spec.build()?;
                gale_checks(&g, depth, &mut checks)?
            }
            ObjectKind::Fsg => {
                let spec: FsgSpec = serde_json::from_value(value.clone())?;
                let gambler = spec.build()?;
                let mut ok = true;
                for (name, s) in [("induced_gale_s1", 1.0), ("induced_gale_s1/2", 0.5)] {
                    let report = validate(&induced_gale(&gambler, s)?, depth)?;
                    ok &= record(&mut checks, name, &report)?;
                }
                ok
            }
            ObjectKind::Predictor => {
                let spec: PredictorSpec = serde_json::from_value(value.clone())?;
                let pi = spec.build()?;
                let mut ok = record(
                    &mut checks,
                    "normalization",
                    &check_predictor(pi.as_ref(), depth)?,
                )?;
                if ok {
                    let report = validate(&to_martingale(pi), depth)?;
                    ok &= record(&mut checks, "martingale", &report)?;
                }
                ok
            }
        })
    })();

    let passed = match built {
        Ok(ok) => ok,
        Err(e) if is_check_failure(&e) => {
            checks.insert(
                "construction".into(),
                json!({ "passed": false, "error": e.to_string() }),
            );
            eprintln!("check failed: {e}");
            false
        }
        Err(e) => return Err(e).with_context(|| format!("validating {}", args.file.display())),
    };
    let config = json!({
        "file": args.file.display().to_string(),
        "file_sha256": sha256_hex(raw.as_bytes()),
        "kind": kind,
        "depth": depth,
    });
    let outputs = json!({ "passed": passed, "checks": checks });
    let report = RunReport::new("validate", config, global.seed, outputs);
    emit(global, &render(global, &report, Format::Json)?, false)?;
    Ok(Outcome::from_bool(passed))
}
