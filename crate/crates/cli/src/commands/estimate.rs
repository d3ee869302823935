use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use galedim::compressor::dim_estimates_in;
use galedim::fsg::{standard_library, success_exponent_search_in, SuccessMode};
use galedim::predictor::{
    bound_check_with_slack, loss_trace_in, KtPredictor, Predictor, PredictorSpec,
};
use galedim::seqio::read_sequence;
use galedim::tail_window;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::report::{emit, render, sha256_hex, Outcome, RunReport};
use crate::{Format, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Compress,
    Fsg,
    Predict,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Sequence file: ASCII bits, or packed when the extension is `.bin`.
    pub input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Method::Compress, Method::Fsg, Method::Predict])]
    pub methods: Vec<Method>,
    /// Predictor JSON for the `predict` method; KT when absent.
    #[arg(long)]
    pub predictor: Option<PathBuf>,
    /// Slack allowed on each side of the predictability bounds.
    #[arg(long, default_value_t = 0.05)]
    pub slack: f64,
}

fn fsg_estimate(w: &[u8], window: (usize, usize)) -> Result<Value> {
    let mut best: [Option<(f64, String)>; 2] = [None, None];
    for (name, gambler) in standard_library() {
        for (slot, mode) in [SuccessMode::Io, SuccessMode::Ae].into_iter().enumerate() {
            let found = success_exponent_search_in(&gambler, w, mode, window)?;
            if best[slot]
                .as_ref()
                .is_none_or(|(t, _)| found.threshold < *t)
            {
                best[slot] = Some((found.threshold, name.clone()));
            }
        }
    }
    let [Some((lower, lower_by)), Some((upper, upper_by))] = best else {
        bail!("empty gambler library");
    };
    Ok(json!({ "lower": lower, "upper": upper, "lower_by": lower_by, "upper_by": upper_by }))
}

pub fn run(global: &Global, args: &EstimateArgs) -> Result<Outcome> {
    let raw =
        std::fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let w =
        read_sequence(&args.input).with_context(|| format!("parsing {}", args.input.display()))?;
    if w.is_empty() {
        bail!("{} holds no bits", args.input.display());
    }
    let window = global.window.unwrap_or_else(|| tail_window(w.len()));
    let mut methods = args.methods.clone();
    methods.sort();
    methods.dedup();

    let predictor_spec: Option<PredictorSpec> = match &args.predictor {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Some(
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))?,
            )
        }
        None => None,
    };
    let predictor: Arc<dyn Predictor> = match &predictor_spec {
        Some(spec) => spec.build()?,
        None => Arc::new(KtPredictor),
    };

    let mut outputs = Map::new();
    let mut dims: Vec<(Method, f64, f64)> = Vec::new();
    for &method in &methods {
        let value = match method {
            Method::Compress => {
                let e = dim_estimates_in(&w, window)?;
                dims.push((method, e.lower, e.upper));
                serde_json::to_value(e)?
            }
            Method::Fsg => {
                let v = fsg_estimate(&w, window)?;
                dims.push((
                    method,
                    v["lower"].as_f64().unwrap_or(1.0),
                    v["upper"].as_f64().unwrap_or(1.0),
                ));
                v
            }
            Method::Predict => {
                let t = loss_trace_in(predictor.as_ref(), &w, window)?;
                dims.push((method, t.rate_lower, t.rate_upper));
                serde_json::to_value(t)?
            }
        };
        outputs.insert(format!("{method:?}").to_lowercase(), value);
    }

    if methods.len() >= 2 {
        let trace = loss_trace_in(predictor.as_ref(), &w, window)?;
        let clamp_p = |p: f64| p.clamp(0.5, 1.0);
        let mut cross = Map::new();
        for (method, lower, upper) in &dims {
            let upper_pred = bound_check_with_slack(
                clamp_p(trace.success_upper),
                lower.clamp(0.0, 1.0),
                args.slack,
            )?;
            let lower_pred = bound_check_with_slack(
                clamp_p(trace.success_lower),
                upper.clamp(0.0, 1.0),
                args.slack,
            )?;
            cross.insert(
                format!("{method:?}").to_lowercase(),
                json!({ "dimension": upper_pred, "strong_dimension": lower_pred }),
            );
        }
        outputs.insert("bound_check".into(), Value::Object(cross));
    }

    let config = json!({
        "input": args.input.display().to_string(),
        "input_sha256": sha256_hex(&raw),
        "bits": w.len(),
        "methods": methods,
        "window": window,
        "predictor": predictor_spec,
        "slack": args.slack,
    });
    let report = RunReport::new("estimate", config, global.seed, Value::Object(outputs));
    emit(global, &render(global, &report, Format::Json)?, false)?;
    Ok(Outcome::Pass)
}
