use anyhow::Result;
use clap::Args;
use galedim::bias::{chernoff_alpha, deviation_tail_exact, deviation_tail_mc};
use galedim::Error;
use serde::Serialize;
use serde_json::json;

use super::load_bias;
use crate::report::{emit, render, require_seed, Outcome, RunReport};
use crate::{Format, Global};

#[derive(Args, Debug)]
pub struct DeviationArgs {
    /// A rational such as `1/3`, or a JSON bias file.
    #[arg(long)]
    pub bias: String,
    /// Comma-separated prefix lengths.
    #[arg(short = 'n', long = "lengths", value_delimiter = ',', required = true)]
    pub lengths: Vec<usize>,
    #[arg(long)]
    pub eps: f64,
    /// Monte-Carlo trials per length; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    /// `None` when the exact computation is over budget.
    exact: Option<f64>,
    mc: Option<f64>,
    mc_stderr: Option<f64>,
    bound: Option<f64>,
    exact_within_bound: Option<bool>,
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run(global: &Global, args: &DeviationArgs) -> Result<Outcome> {
    let (beta, spec) = load_bias(&args.bias)?;
    let seed = if args.trials > 0 {
        Some(require_seed(global, "deviation with --trials")?)
    } else {
        global.seed
    };
    let chernoff = chernoff_alpha(beta.delta(), args.eps).ok();
    let mut rows = Vec::with_capacity(args.lengths.len());
    for &n in &args.lengths {
        let exact = match deviation_tail_exact(&beta, n, args.eps) {
            Ok(t) => Some(t.probability),
            Err(Error::Resource(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let mc = match seed.filter(|_| args.trials > 0) {
            Some(seed) => Some(deviation_tail_mc(&beta, n, args.eps, args.trials, seed)?),
            None => None,
        };
        let bound = chernoff.map(|c| c.bound(n));
        let exact_within_bound = exact.zip(bound).map(|(e, b)| e <= b);
        rows.push(Row {
            n,
            exact,
            mc: mc.map(|m| m.estimate),
            mc_stderr: mc.map(|m| m.stderr),
            bound,
            exact_within_bound,
        });
    }
    let ok = rows.iter().all(|r| r.exact_within_bound != Some(false));

    let text = match global.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(["n", "exact", "mc", "mc_stderr", "bound"])?;
            for r in &rows {
                let exact = r
                    .exact
                    .map_or_else(|| "mc-only".to_string(), |e| e.to_string());
                out.write_record([
                    r.n.to_string(),
                    exact,
                    cell(r.mc),
                    cell(r.mc_stderr),
                    cell(r.bound),
                ])?;
            }
            String::from_utf8(out.into_inner()?)?
        }
        Format::Json => {
            let config = json!({ "bias": spec, "lengths": args.lengths, "eps": args.eps, "trials": args.trials });
            let outputs = json!({ "chernoff": chernoff, "rows": rows });
            render(
                global,
                &RunReport::new("deviation", config, seed, outputs),
                Format::Json,
            )?
        }
    };
    emit(global, &text, false)?;
    Ok(Outcome::from_bool(ok))
}
