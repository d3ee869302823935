use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use galedim::bias::sample_sequence;
use galedim::bits::Bit;
use galedim::constructions::{
    box_counts, build_regularity_prefix, describe_system, entropy_rate, ledger_csv,
    regularity_ledger, sandwich_check, selfsimilar_dimension, ParitySchedule, RegularitySpec,
    SelfSimilarSystem,
};
use galedim::rational::Rat;
use galedim::seqio::write_sequence;
use serde_json::{json, Value};

use super::load_bias;
use crate::report::{emit, render, require_seed, sha256_hex, Outcome, RunReport};
use crate::{Format, Global};

/// Box counts in the report stop here.
const MAX_BOX_COUNT_LENGTH: usize = 1024;

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// Random blocks `r_n` of length `2n - 1`, each followed by zero padding.
    Regularity(RegularityArgs),
    /// A prefix of a sequence in `A^inf`, cycling through `A` in sorted order.
    Selfsimilar(SelfSimilarArgs),
    /// A sample from a bias sequence.
    Biased(BiasedArgs),
}

#[derive(Args, Debug)]
pub struct RegularityArgs {
    #[arg(long)]
    pub alpha: Rat,
    #[arg(long)]
    pub beta: Rat,
    #[arg(long, value_parser = parse_schedule, default_value = "logstar")]
    pub schedule: ParitySchedule,
    #[arg(short = 'n', long)]
    pub length: usize,
    /// Block ledger CSV; defaults to the output path with `.ledger.csv` appended.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// Number of blocks checked against the length sandwich.
    #[arg(long, default_value_t = 10_000)]
    pub check_blocks: u64,
}

#[derive(Args, Debug)]
pub struct SelfSimilarArgs {
    /// Comma-separated strings such as `0,10`, or a JSON file holding a list.
    #[arg(long)]
    pub set: String,
    #[arg(short = 'n', long)]
    pub length: usize,
}

#[derive(Args, Debug)]
pub struct BiasedArgs {
    /// A rational such as `1/4`, or a JSON bias file.
    #[arg(long)]
    pub bias: String,
    #[arg(short = 'n', long)]
    pub length: usize,
}

fn parse_schedule(text: &str) -> Result<ParitySchedule, String> {
    serde_json::from_value(Value::String(text.into()))
        .map_err(|_| format!("unknown schedule {text:?}"))
}

fn load_set(text: &str) -> Result<SelfSimilarSystem> {
    if text.chars().all(|c| matches!(c, '0' | '1' | ',')) {
        let items: Vec<String> = text.split(',').map(str::to_string).collect();
        return Ok(SelfSimilarSystem::parse(&items)?);
    }
    let raw = std::fs::read_to_string(text).with_context(|| format!("reading {text}"))?;
    let items: Vec<String> =
        serde_json::from_str(&raw).with_context(|| format!("parsing {text}"))?;
    Ok(SelfSimilarSystem::parse(&items)?)
}

fn write_output(global: &Global, bits: &[Bit]) -> Result<(PathBuf, String)> {
    let path = global
        .out
        .clone()
        .context("construct needs --out for the sequence file")?;
    write_sequence(&path, bits).with_context(|| format!("writing {}", path.display()))?;
    let digest = sha256_hex(&std::fs::read(&path)?);
    Ok((path, digest))
}

fn ones(bits: &[Bit]) -> usize {
    bits.iter().filter(|&&b| b == 1).count()
}

fn default_ledger(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".ledger.csv");
    PathBuf::from(name)
}

pub fn run(global: &Global, kind: &ConstructKind) -> Result<Outcome> {
    let (name, config, outputs, outcome) = match kind {
        ConstructKind::Regularity(args) => {
            let seed = require_seed(global, "construct regularity")?;
            let spec = RegularitySpec {
                alpha: args.alpha.clone(),
                beta: args.beta.clone(),
                seed,
                schedule: args.schedule,
            };
            let prefix = build_regularity_prefix(&spec, args.length)?;
            let (path, digest) = write_output(global, &prefix.bits)?;
            let ledger_path = args.ledger.clone().unwrap_or_else(|| default_ledger(&path));
            std::fs::write(&ledger_path, ledger_csv(&prefix.ledger)?)
                .with_context(|| format!("writing {}", ledger_path.display()))?;
            let sandwich = sandwich_check(&spec, &regularity_ledger(&spec, args.check_blocks)?);
            let ok = sandwich.passed && sandwich.structure_ok;
            let config =
                json!({ "spec": spec, "length": args.length, "check_blocks": args.check_blocks });
            let outputs = json!({
                "sequence": path.display().to_string(),
                "sequence_sha256": digest,
                "ledger": ledger_path.display().to_string(),
                "blocks": prefix.ledger.len(),
                "ones": ones(&prefix.bits),
                "sandwich": sandwich,
            });
            (
                "construct regularity",
                config,
                outputs,
                Outcome::from_bool(ok),
            )
        }
        ConstructKind::Selfsimilar(args) => {
            let system = load_set(&args.set)?;
            let bits = system.round_robin(args.length);
            let (path, digest) = write_output(global, &bits)?;
            let horizon = args.length.min(MAX_BOX_COUNT_LENGTH);
            let counts = box_counts(&system, horizon);
            let rate = if horizon >= 1 {
                Some(entropy_rate(&counts, (horizon.div_ceil(2), horizon))?)
            } else {
                None
            };
            let config = json!({ "set": describe_system(&system), "length": args.length });
            let outputs = json!({
                "sequence": path.display().to_string(),
                "sequence_sha256": digest,
                "dimension": selfsimilar_dimension(&system),
                "box_count_horizon": horizon,
                "box_count": counts[horizon].to_string(),
                "entropy_rate": rate,
            });
            ("construct selfsimilar", config, outputs, Outcome::Pass)
        }
        ConstructKind::Biased(args) => {
            let seed = require_seed(global, "construct biased")?;
            let (beta, spec) = load_bias(&args.bias)?;
            let bits = sample_sequence(&beta, args.length, seed);
            let (path, digest) = write_output(global, &bits)?;
            let expected: f64 = (0..args.length as u64).map(|i| beta.beta(i)).sum();
            let config = json!({ "bias": spec, "length": args.length });
            let outputs = json!({
                "sequence": path.display().to_string(),
                "sequence_sha256": digest,
                "ones": ones(&bits),
                "expected_ones": expected,
            });
            ("construct biased", config, outputs, Outcome::Pass)
        }
    };
    let report = RunReport::new(name, config, global.seed, outputs);
    emit(global, &render(global, &report, Format::Json)?, true)?;
    Ok(outcome)
}
