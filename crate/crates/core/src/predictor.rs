//! Sequential predictors, log-loss, and the predictor/martingale correspondence.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bias::{shannon_entropy, BiasSequence, BiasSpec};
use crate::bits::{format_bits, parse_bits, strings_of_length, Bit};
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::gale::{csv_string, Capital, GaleKind, SGale, ValidationMode, ValidationReport};
use crate::logspace::log2_sum;
use crate::rational::{in_unit_interval, to_f64, Rat};
use crate::tail_window;

/// `pi(w, b)`: the probability assigned to `b` after seeing `w`.
pub trait Predictor: Send + Sync + fmt::Debug {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64>;

    fn predict_exact(&self, _w: &[Bit], _b: Bit) -> Result<Option<BigRational>> {
        Ok(None)
    }

    /// `pi(prefix[0..i], prefix[i])` for every `i`.
    fn predictions_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        (0..prefix.len())
            .map(|i| self.predict(&prefix[..i], prefix[i]))
            .collect()
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn check_probability(p: &BigRational, what: &str) -> Result<()> {
    if in_unit_interval(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} {p} is not a probability")))
    }
}

/// `pi(., 1) = p1`.
#[derive(Clone, Debug)]
pub struct ConstantPredictor {
    p1: BigRational,
    value: f64,
}

impl ConstantPredictor {
    pub fn new(p1: BigRational) -> Result<Self> {
        check_probability(&p1, "prediction")?;
        let value = to_f64(&p1);
        Ok(ConstantPredictor { p1, value })
    }

    pub fn uniform() -> Self {
        ConstantPredictor::new(half()).expect("1/2 is a probability")
    }
}

impl Predictor for ConstantPredictor {
    fn predict(&self, _w: &[Bit], b: Bit) -> Result<f64> {
        Ok(if b == 1 { self.value } else { 1.0 - self.value })
    }

    fn predict_exact(&self, _w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        Ok(Some(if b == 1 {
            self.p1.clone()
        } else {
            BigRational::one() - &self.p1
        }))
    }
}

/// `pi(w, 1) = beta_|w|`.
#[derive(Clone, Debug)]
pub struct MeasurePredictor {
    beta: BiasSequence,
}

impl MeasurePredictor {
    pub fn new(beta: BiasSequence) -> Self {
        MeasurePredictor { beta }
    }
}

impl Predictor for MeasurePredictor {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64> {
        Ok(self.beta.prob_of(w.len() as u64, b))
    }

    fn predict_exact(&self, w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        Ok(self.beta.prob_of_exact(w.len() as u64, b))
    }
}

/// Explicit `[pi(w,0), pi(w,1)]` per history, with a default pair.
#[derive(Clone, Debug)]
pub struct TablePredictor {
    table: HashMap<Vec<Bit>, [BigRational; 2]>,
    default: [BigRational; 2],
}

impl TablePredictor {
    /// Entries need not sum to 1; [`check_predictor`] reports those that do not.
    pub fn new(
        table: HashMap<Vec<Bit>, [BigRational; 2]>,
        default: [BigRational; 2],
    ) -> Result<Self> {
        for pair in table.values().chain(std::iter::once(&default)) {
            for p in pair {
                check_probability(p, "table entry")?;
            }
        }
        Ok(TablePredictor { table, default })
    }

    fn pair(&self, w: &[Bit]) -> &[BigRational; 2] {
        self.table.get(w).unwrap_or(&self.default)
    }
}

impl Predictor for TablePredictor {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64> {
        Ok(to_f64(&self.pair(w)[b as usize]))
    }

    fn predict_exact(&self, w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        Ok(Some(self.pair(w)[b as usize].clone()))
    }
}

/// Krichevsky-Trofimov estimator `(count_b + 1/2) / (|w| + 1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct KtPredictor;

impl Predictor for KtPredictor {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64> {
        let count = w.iter().filter(|&&x| x == b).count();
        Ok((count as f64 + 0.5) / (w.len() as f64 + 1.0))
    }

    fn predict_exact(&self, w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        let count = w.iter().filter(|&&x| x == b).count();
        Ok(Some(BigRational::new(
            (2 * count + 1).into(),
            (2 * w.len() + 2).into(),
        )))
    }

    fn predictions_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let mut counts = [0usize; 2];
        Ok(prefix
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let p = (counts[b as usize] as f64 + 0.5) / (i as f64 + 1.0);
                counts[b as usize] += 1;
                p
            })
            .collect())
    }
}

/// `pi(w, b) = d(wb) / (2 d(w))` for a martingale `d`.
#[derive(Clone, Debug)]
pub struct MartingalePredictor {
    d: SGale,
}

impl Predictor for MartingalePredictor {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64> {
        let lw = self.d.log_capital(w)?;
        if lw == f64::NEG_INFINITY {
            return Err(Error::UndefinedConditional(format_bits(w)));
        }
        let mut wb = w.to_vec();
        wb.push(b);
        Ok((self.d.log_capital(&wb)? - lw - 1.0).exp2())
    }

    fn predict_exact(&self, w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        let Some(dw) = self.d.exact_capital(w)? else {
            return Ok(None);
        };
        let inv = dw
            .recip()
            .ok_or_else(|| Error::UndefinedConditional(format_bits(w)))?;
        let mut wb = w.to_vec();
        wb.push(b);
        let Some(dwb) = self.d.exact_capital(&wb)? else {
            return Ok(None);
        };
        let ratio = &(&dwb * &inv) * &half();
        Ok(ratio.as_rational().cloned())
    }

    fn predictions_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let logs = self.d.log_capitals_along(prefix)?;
        (0..prefix.len())
            .map(|i| {
                if logs[i] == f64::NEG_INFINITY {
                    Err(Error::UndefinedConditional(format_bits(&prefix[..i])))
                } else {
                    Ok((logs[i + 1] - logs[i] - 1.0).exp2())
                }
            })
            .collect()
    }
}

pub fn from_martingale(d: &SGale) -> Result<MartingalePredictor> {
    if d.s() != 1.0 {
        return Err(Error::Domain(format!(
            "expected a martingale (s = 1), got s = {}",
            d.s()
        )));
    }
    Ok(MartingalePredictor { d: d.clone() })
}

/// Weighted mixture with weights `2^-(2j+3)` and a uniform floor `2^-(2m+1)`.
///
/// With `mu_m(w) = 2^-(2m+1) + sum_{j < min(m, J)} 2^-(2j+3) mu[pi_j](w)`,
/// the mixture predicts `pi(w, 1) = mu_{|w|+1}(w1) / mu_{|w|}(w)`.
#[derive(Clone, Debug)]
pub struct MixturePredictor {
    components: Vec<Arc<dyn Predictor>>,
}

impl MixturePredictor {
    fn log_mu(&self, m: usize, component_logs: &[f64]) -> f64 {
        let active = m.min(self.components.len());
        log2_sum(
            std::iter::once(-(2.0 * m as f64 + 1.0)).chain(
                component_logs[..active]
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l - (2.0 * j as f64 + 3.0)),
            ),
        )
    }

    fn prob_one(&self, m: usize, logs_w: &[f64], logs_w1: &[f64]) -> f64 {
        (self.log_mu(m + 1, logs_w1) - self.log_mu(m, logs_w))
            .exp2()
            .min(1.0)
    }

    fn exact_mu(&self, m: usize, mus: &[BigRational]) -> BigRational {
        let active = m.min(self.components.len());
        let floor = crate::rational::pow2(-(2 * m as i64 + 1));
        mus[..active]
            .iter()
            .enumerate()
            .fold(floor, |acc, (j, mu)| {
                acc + mu * crate::rational::pow2(-(2 * j as i64 + 3))
            })
    }
}

pub fn mixture(components: Vec<Arc<dyn Predictor>>) -> Result<MixturePredictor> {
    if components.is_empty() {
        return Err(Error::Domain("mixture of no predictors".into()));
    }
    Ok(MixturePredictor { components })
}

impl Predictor for MixturePredictor {
    fn predict(&self, w: &[Bit], b: Bit) -> Result<f64> {
        let mut logs_w = Vec::with_capacity(self.components.len());
        let mut logs_w1 = Vec::with_capacity(self.components.len());
        for pi in &self.components {
            let l = -log_loss(pi.as_ref(), w)?;
            logs_w.push(l);
            logs_w1.push(l + pi.predict(w, 1)?.log2());
        }
        let p1 = self.prob_one(w.len(), &logs_w, &logs_w1);
        Ok(if b == 1 { p1 } else { 1.0 - p1 })
    }

    fn predict_exact(&self, w: &[Bit], b: Bit) -> Result<Option<BigRational>> {
        let mut mus_w = Vec::with_capacity(self.components.len());
        let mut mus_w1 = Vec::with_capacity(self.components.len());
        for pi in &self.components {
            let Some(mu) = exact_measure(pi.as_ref(), w)? else {
                return Ok(None);
            };
            let Some(p1) = pi.predict_exact(w, 1)? else {
                return Ok(None);
            };
            mus_w1.push(&mu * p1);
            mus_w.push(mu);
        }
        let p1 = self.exact_mu(w.len() + 1, &mus_w1) / self.exact_mu(w.len(), &mus_w);
        Ok(Some(if b == 1 { p1 } else { BigRational::one() - p1 }))
    }

    fn predictions_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let per_component = self
            .components
            .iter()
            .map(|pi| pi.predictions_along(prefix))
            .collect::<Result<Vec<_>>>()?;
        let mut logs = vec![0.0; self.components.len()];
        let mut out = Vec::with_capacity(prefix.len());
        for (i, &b) in prefix.iter().enumerate() {
            let logs_w1: Vec<f64> = per_component
                .iter()
                .zip(&logs)
                .map(|(preds, l)| {
                    let p1 = if b == 1 { preds[i] } else { 1.0 - preds[i] };
                    l + p1.log2()
                })
                .collect();
            let p1 = self.prob_one(i, &logs, &logs_w1);
            out.push(if b == 1 { p1 } else { 1.0 - p1 });
            for (l, preds) in logs.iter_mut().zip(&per_component) {
                *l += preds[i].log2();
            }
        }
        Ok(out)
    }
}

/// `mu[pi](w) = prod_i pi(w[0..i], w[i])` in rationals.
pub fn exact_measure(pi: &dyn Predictor, w: &[Bit]) -> Result<Option<BigRational>> {
    let mut product = BigRational::one();
    for i in 0..w.len() {
        match pi.predict_exact(&w[..i], w[i])? {
            Some(p) => product *= p,
            None => return Ok(None),
        }
    }
    Ok(Some(product))
}

/// `sum_i -log2 pi(w[0..i], w[i])`; infinite when a realized bit had probability 0.
pub fn log_loss(pi: &dyn Predictor, w: &[Bit]) -> Result<f64> {
    Ok(cumulative_losses(&pi.predictions_along(w)?)
        .pop()
        .unwrap_or(0.0))
}

fn cumulative_losses(predictions: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(predictions.len() + 1);
    let mut total = 0.0;
    out.push(total);
    for p in predictions {
        total += -p.log2();
        out.push(total);
    }
    out
}

#[derive(Debug)]
struct PredictorCapital {
    pi: Arc<dyn Predictor>,
}

impl Capital for PredictorCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        Ok(*self.log_capitals_along(w)?.last().expect("nonempty trace"))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        Ok(exact_measure(self.pi.as_ref(), w)?
            .map(|mu| Surd::from_rational(mu * crate::rational::pow2(w.len() as i64))))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let losses = cumulative_losses(&self.pi.predictions_along(prefix)?);
        Ok(losses
            .iter()
            .enumerate()
            .map(|(n, l)| n as f64 - l)
            .collect())
    }
}

/// `d(w) = 2^|w| mu[pi](w)`, so `log2 d(w) = |w| - L(pi, w)`.
pub fn to_martingale(pi: Arc<dyn Predictor>) -> SGale {
    SGale::new(1.0, GaleKind::Gale, Arc::new(PredictorCapital { pi })).expect("exponent 1 is valid")
}

/// Cumulative log-loss and success counts along a prefix.
#[derive(Clone, Debug, Serialize)]
pub struct LossTrace {
    pub n: usize,
    /// `L(pi, w[0..m])` for `m = 0..=n`.
    #[serde(skip)]
    pub losses: Vec<f64>,
    /// `pi^+(w[0..m])` for `m = 0..=n`.
    #[serde(skip)]
    pub successes: Vec<f64>,
    pub window: (usize, usize),
    pub rate_lower: f64,
    pub rate_upper: f64,
    pub success_lower: f64,
    pub success_upper: f64,
}

impl LossTrace {
    /// CSV with columns `n,loss,success`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["n", "loss", "success"])?;
        for (n, (l, s)) in self.losses.iter().zip(&self.successes).enumerate() {
            out.write_record([n.to_string(), l.to_string(), s.to_string()])?;
        }
        csv_string(out)
    }
}

pub fn loss_trace(pi: &dyn Predictor, w: &[Bit]) -> Result<LossTrace> {
    loss_trace_in(pi, w, tail_window(w.len()))
}

pub fn loss_trace_in(pi: &dyn Predictor, w: &[Bit], window: (usize, usize)) -> Result<LossTrace> {
    if w.is_empty() {
        return Err(Error::Domain(
            "loss rates of the empty string are undefined".into(),
        ));
    }
    if window.0 > window.1 || window.1 > w.len() || window.1 == 0 {
        return Err(Error::Domain(format!(
            "bad window {window:?} for length {}",
            w.len()
        )));
    }
    let predictions = pi.predictions_along(w)?;
    let losses = cumulative_losses(&predictions);
    let mut successes = Vec::with_capacity(w.len() + 1);
    successes.push(0.0);
    let mut total = 0.0;
    for p in &predictions {
        total += p;
        successes.push(total);
    }
    let span = window.0.max(1)..=window.1;
    let rate = |m: usize| losses[m] / m as f64;
    let success = |m: usize| successes[m] / m as f64;
    let fold = |f: &dyn Fn(usize) -> f64| {
        span.clone()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (rate_lower, rate_upper) = fold(&rate);
    let (success_lower, success_upper) = fold(&success);
    Ok(LossTrace {
        n: w.len(),
        losses,
        successes,
        window,
        rate_lower,
        rate_upper,
        success_lower,
        success_upper,
    })
}

/// `pi^+(w) / |w|`, the expected fraction of correct predictions.
pub fn success_rate(pi: &dyn Predictor, w: &[Bit]) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Domain(
            "success rate of the empty string is undefined".into(),
        ));
    }
    Ok(pi.predictions_along(w)?.iter().sum::<f64>() / w.len() as f64)
}

/// `2(1 - p) <= d <= H(p)`, each side allowed `slack`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub predictability: f64,
    pub dimension: f64,
    pub slack: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn bound_check(p: f64, d: f64) -> Result<BoundCheck> {
    bound_check_with_slack(p, d, 0.0)
}

pub fn bound_check_with_slack(p: f64, d: f64, slack: f64) -> Result<BoundCheck> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "predictability {p} outside [1/2, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!("dimension {d} outside [0, 1]")));
    }
    let lower = 2.0 * (1.0 - p);
    let upper = shannon_entropy(p);
    Ok(BoundCheck {
        predictability: p,
        dimension: d,
        slack,
        lower,
        upper,
        lower_holds: lower <= d + slack,
        upper_holds: d <= upper + slack,
    })
}

/// Checks `pi(w,0) + pi(w,1) = 1` and `pi(w,b) in [0,1]` at every node of depth `< depth`.
pub fn check_predictor(pi: &dyn Predictor, depth: usize) -> Result<ValidationReport> {
    if depth > crate::gale::MAX_FLOAT_DEPTH {
        return Err(Error::Resource(format!(
            "predictor checks limited to depth {}",
            crate::gale::MAX_FLOAT_DEPTH
        )));
    }
    let exact = pi.predict_exact(&[], 0)?.is_some();
    let mode = if exact {
        ValidationMode::Exact
    } else {
        ValidationMode::Float
    };
    let mut report = ValidationReport::new(mode, depth, crate::gale::FLOAT_TOLERANCE);
    for len in 0..depth {
        for w in strings_of_length(len) {
            let (violation, failed) = if exact {
                let p0 = pi
                    .predict_exact(&w, 0)?
                    .ok_or_else(|| Error::Domain("mixed exactness".into()))?;
                let p1 = pi
                    .predict_exact(&w, 1)?
                    .ok_or_else(|| Error::Domain("mixed exactness".into()))?;
                let sum = &p0 + &p1;
                let bad = !sum.is_one() || !in_unit_interval(&p0) || !in_unit_interval(&p1);
                (to_f64(&(sum - BigRational::one())).abs(), bad)
            } else {
                let (p0, p1) = (pi.predict(&w, 0)?, pi.predict(&w, 1)?);
                let off = (p0 + p1 - 1.0).abs();
                let bad = off > crate::gale::FLOAT_TOLERANCE
                    || !(0.0..=1.0).contains(&p0)
                    || !(0.0..=1.0).contains(&p1);
                (off, bad)
            };
            report.record(
                &w,
                violation,
                if failed {
                    violation.max(f64::MIN_POSITIVE)
                } else {
                    0.0
                },
                failed,
            );
        }
    }
    report.finish();
    Ok(report)
}

/// JSON form of a predictor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PredictorSpec {
    Constant {
        p1: Rat,
    },
    Measure {
        bias: BiasSpec,
    },
    Table {
        /// History to `[pi(w,0), pi(w,1)]`.
        table: BTreeMap<String, [Rat; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<[Rat; 2]>,
    },
    Kt,
    Mixture {
        components: Vec<PredictorSpec>,
    },
}

impl PredictorSpec {
    pub fn build(&self) -> Result<Arc<dyn Predictor>> {
        Ok(match self {
            PredictorSpec::Constant { p1 } => Arc::new(ConstantPredictor::new(p1.0.clone())?),
            PredictorSpec::Measure { bias } => Arc::new(MeasurePredictor::new(bias.build()?)),
            PredictorSpec::Table { table, default } => {
                let table = table
                    .iter()
                    .map(|(w, [p0, p1])| Ok((parse_bits(w)?, [p0.0.clone(), p1.0.clone()])))
                    .collect::<Result<HashMap<_, _>>>()?;
                let default = default
                    .as_ref()
                    .map(|[p0, p1]| [p0.0.clone(), p1.0.clone()])
                    .unwrap_or_else(|| [half(), half()]);
                Arc::new(TablePredictor::new(table, default)?)
            }
            PredictorSpec::Kt => Arc::new(KtPredictor),
            PredictorSpec::Mixture { components } => Arc::new(mixture(
                components
                    .iter()
                    .map(PredictorSpec::build)
                    .collect::<Result<_>>()?,
            )?),
        })
    }
}
