//! s-gales, s-supergales and martingales.
//!
//! A gale is stored as a [`Capital`] function evaluated in the `log2`
//! domain. The betting fraction on bit `b` after history `w` is recovered as
//! `bet(w, b) = d(wb) / (2^s d(w))`, so every step of an evaluation satisfies
//! `log d(wb) = log d(w) + s + log2 bet(w, b)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::bias::{BiasSequence, BiasSpec};
use crate::bits::{check_prefix_set, format_bits, parse_bits, strings_of_length, Bit};
use crate::error::{Error, Result};
use crate::exact::{halves, Surd};
use crate::logspace::log2_sum;
use crate::rational::{in_unit_interval, rational_from_f64, to_f64, Rat};
use crate::tail_window;

/// Relative tolerance of float-mode validation.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
/// Exact validation is attempted up to this depth.
pub const MAX_EXACT_DEPTH: usize = 16;
/// Float validation refuses deeper trees.
pub const MAX_FLOAT_DEPTH: usize = 22;

/// A capital function `w -> d(w)`.
pub trait Capital: Send + Sync + fmt::Debug {
    /// `log2 d(w)`, `-inf` for zero capital.
    fn log_capital(&self, w: &[Bit]) -> Result<f64>;

    /// Exact capital when every quantity involved lies in `Q(sqrt 2)`.
    fn exact_capital(&self, _w: &[Bit]) -> Result<Option<Surd>> {
        Ok(None)
    }

    /// `log2 d(prefix[0..n])` for `n = 0..=prefix.len()`.
    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        (0..=prefix.len())
            .map(|n| self.log_capital(&prefix[..n]))
            .collect()
    }

    /// Longest string the capital is defined on, if bounded.
    fn depth(&self) -> Option<usize> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum GaleKind {
    #[default]
    Gale,
    Supergale,
}

/// An s-gale or s-supergale.
///
/// `scale_exponent` is recorded as an accumulated shift rather than a new
/// wrapper, so a shift by `t` followed by `-t` restores the original
/// log-capitals bit for bit.
#[derive(Clone, Debug)]
pub struct SGale {
    base_s: f64,
    shift: f64,
    kind: GaleKind,
    capital: Arc<dyn Capital>,
}

impl SGale {
    /// Wraps a capital function that already satisfies the condition at exponent `s`.
    pub fn new(s: f64, kind: GaleKind, capital: Arc<dyn Capital>) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::Domain(format!(
                "exponent must be finite and nonnegative, got {s}"
            )));
        }
        Ok(SGale {
            base_s: s,
            shift: 0.0,
            kind,
            capital,
        })
    }

    /// `d(lambda) = initial`, `d(wb) = 2^s bet(w, b) d(w)`.
    pub fn from_bets(
        s: f64,
        kind: GaleKind,
        initial: BigRational,
        rule: Arc<dyn BetRule>,
    ) -> Result<Self> {
        if initial.is_negative() {
            return Err(Error::Domain(format!(
                "initial capital {initial} is negative"
            )));
        }
        let capital = BetCapital {
            s,
            s_halves: halves(s),
            log_initial: to_f64(&initial).log2(),
            initial,
            rule,
        };
        SGale::new(s, kind, Arc::new(capital))
    }

    pub fn s(&self) -> f64 {
        self.base_s - self.shift
    }

    pub fn kind(&self) -> GaleKind {
        self.kind
    }

    /// Same capital, relabelled (e.g. to validate a supergale as if it were a gale).
    pub fn with_kind(&self, kind: GaleKind) -> SGale {
        SGale {
            kind,
            ..self.clone()
        }
    }

    pub fn log_initial(&self) -> Result<f64> {
        self.log_capital(&[])
    }

    /// `s` as a count of halves, when exact mode can represent `2^s`.
    pub fn s_halves(&self) -> Option<i64> {
        Some(halves(self.base_s)? - halves(self.shift)?)
    }

    /// True when exact capitals are available.
    pub fn is_exact(&self) -> bool {
        self.s_halves().is_some() && matches!(self.exact_capital(&[]), Ok(Some(_)))
    }

    /// `bet(w, b) = d(wb) / (2^s d(w))`; 0 when `d(w) = 0`.
    pub fn bet(&self, w: &[Bit], b: Bit) -> Result<f64> {
        let lw = self.log_capital(w)?;
        if lw == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let mut wb = w.to_vec();
        wb.push(b);
        Ok((self.log_capital(&wb)? - lw - self.s()).exp2())
    }
}

impl Capital for SGale {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        let l = self.capital.log_capital(w)?;
        Ok(if self.shift == 0.0 {
            l
        } else {
            l - self.shift * w.len() as f64
        })
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some(shift) = halves(self.shift) else {
            return Ok(None);
        };
        let Some(d) = self.capital.exact_capital(w)? else {
            return Ok(None);
        };
        Ok(Some(if shift == 0 {
            d
        } else {
            &d * &Surd::pow2_halves(-shift * w.len() as i64)
        }))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let mut logs = self.capital.log_capitals_along(prefix)?;
        if self.shift != 0.0 {
            for (n, l) in logs.iter_mut().enumerate() {
                *l -= self.shift * n as f64;
            }
        }
        Ok(logs)
    }

    fn depth(&self) -> Option<usize> {
        self.capital.depth()
    }
}

/// Betting fractions `bet(w, b)`; for a gale `bet(w,0) + bet(w,1) = 1`.
pub trait BetRule: Send + Sync + fmt::Debug {
    fn bet(&self, history: &[Bit], bit: Bit) -> f64;

    fn bet_exact(&self, _history: &[Bit], _bit: Bit) -> Option<BigRational> {
        None
    }

    fn depth(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug)]
struct BetCapital {
    s: f64,
    s_halves: Option<i64>,
    initial: BigRational,
    log_initial: f64,
    rule: Arc<dyn BetRule>,
}

impl BetCapital {
    fn checked_bet(&self, history: &[Bit], bit: Bit) -> Result<f64> {
        let bet = self.rule.bet(history, bit);
        if !(0.0..=1.0).contains(&bet) {
            return Err(Error::MalformedRule {
                node: format_bits(history),
                detail: format!("bet {bet} on bit {bit} is outside [0, 1]"),
            });
        }
        Ok(bet)
    }

    fn check_depth(&self, len: usize) -> Result<()> {
        match self.rule.depth() {
            Some(depth) if len > depth => Err(Error::Precondition(format!(
                "string of length {len} exceeds rule depth {depth}"
            ))),
            _ => Ok(()),
        }
    }
}

impl Capital for BetCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        Ok(*self.log_capitals_along(w)?.last().expect("nonempty trace"))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some(h) = self.s_halves else {
            return Ok(None);
        };
        self.check_depth(w.len())?;
        let mut product = self.initial.clone();
        let mut steps = 0i64;
        for i in 0..w.len() {
            let Some(bet) = self.rule.bet_exact(&w[..i], w[i]) else {
                return Ok(None);
            };
            if !in_unit_interval(&bet) {
                return Err(Error::MalformedRule {
                    node: format_bits(&w[..i]),
                    detail: format!("bet {bet} on bit {} is outside [0, 1]", w[i]),
                });
            }
            product *= bet;
            steps += 1;
        }
        let growth = Surd::pow2_halves(h * steps);
        Ok(Some(&growth * &product))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        self.check_depth(prefix.len())?;
        let mut logs = Vec::with_capacity(prefix.len() + 1);
        let mut current = self.log_initial;
        logs.push(current);
        for i in 0..prefix.len() {
            let bet = self.checked_bet(&prefix[..i], prefix[i])?;
            current += self.s + bet.log2();
            logs.push(current);
        }
        Ok(logs)
    }

    fn depth(&self) -> Option<usize> {
        self.rule.depth()
    }
}

/// The same pair of bets after every history.
#[derive(Clone, Debug)]
pub struct ConstantBets {
    bets: [BigRational; 2],
    values: [f64; 2],
}

impl ConstantBets {
    /// `bet(., 0) = bet0`, `bet(., 1) = 1 - bet0`.
    pub fn fair(bet0: BigRational) -> Self {
        let bet1 = BigRational::one() - &bet0;
        Self::pair(bet0, bet1)
    }

    pub fn pair(bet0: BigRational, bet1: BigRational) -> Self {
        let values = [to_f64(&bet0), to_f64(&bet1)];
        ConstantBets {
            bets: [bet0, bet1],
            values,
        }
    }
}

impl BetRule for ConstantBets {
    fn bet(&self, _history: &[Bit], bit: Bit) -> f64 {
        self.values[bit as usize]
    }

    fn bet_exact(&self, _history: &[Bit], bit: Bit) -> Option<BigRational> {
        Some(self.bets[bit as usize].clone())
    }
}

/// Explicit per-history bets with a fallback pair.
#[derive(Clone, Debug)]
pub struct TableBets {
    table: HashMap<Vec<Bit>, [BigRational; 2]>,
    default: [BigRational; 2],
    depth: Option<usize>,
}

impl TableBets {
    pub fn new(
        table: HashMap<Vec<Bit>, [BigRational; 2]>,
        default: [BigRational; 2],
        depth: Option<usize>,
    ) -> Self {
        TableBets {
            table,
            default,
            depth,
        }
    }

    fn pair(&self, history: &[Bit]) -> &[BigRational; 2] {
        self.table.get(history).unwrap_or(&self.default)
    }
}

impl BetRule for TableBets {
    fn bet(&self, history: &[Bit], bit: Bit) -> f64 {
        to_f64(&self.pair(history)[bit as usize])
    }

    fn bet_exact(&self, history: &[Bit], bit: Bit) -> Option<BigRational> {
        Some(self.pair(history)[bit as usize].clone())
    }

    fn depth(&self) -> Option<usize> {
        self.depth
    }
}

/// `bet(w, 1) = beta_|w|`.
#[derive(Clone, Debug)]
pub struct MeasureBets {
    beta: BiasSequence,
}

impl BetRule for MeasureBets {
    fn bet(&self, history: &[Bit], bit: Bit) -> f64 {
        self.beta.prob_of(history.len() as u64, bit)
    }

    fn bet_exact(&self, history: &[Bit], bit: Bit) -> Option<BigRational> {
        self.beta.prob_of_exact(history.len() as u64, bit)
    }
}

/// `d(w) = 2^{s|w|} mu^beta(w)`.
pub fn gale_from_measure(beta: &BiasSequence, s: f64) -> Result<SGale> {
    let (lo, hi) = beta.bounds();
    if !(lo > 0.0 && hi < 1.0) {
        return Err(Error::Domain(format!(
            "bias bounds [{lo}, {hi}] not inside (0, 1)"
        )));
    }
    SGale::from_bets(
        s,
        GaleKind::Gale,
        BigRational::one(),
        Arc::new(MeasureBets { beta: beta.clone() }),
    )
}

/// Values of a gale along a prefix with tail-window statistics.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationTrace {
    #[serde(skip)]
    pub prefix: Vec<Bit>,
    pub n: usize,
    /// `log2 d(prefix[0..n])` for `n = 0..=N`.
    pub log_capitals: Vec<f64>,
    /// `[ceil(N/2), N]`.
    pub window: (usize, usize),
    /// Maximum log-capital over the window.
    pub max_log: f64,
    /// Minimum log-capital over the window.
    pub tail_min_log: f64,
    /// Minimum of `log d / n` over the window (positions `n >= 1`).
    pub lower_exponent: f64,
    /// Maximum of `log d / n` over the window (positions `n >= 1`).
    pub upper_exponent: f64,
}

impl EvaluationTrace {
    pub fn from_log_capitals(prefix: Vec<Bit>, log_capitals: Vec<f64>) -> Self {
        let n = prefix.len();
        let window = tail_window(n);
        let slice = &log_capitals[window.0..=window.1];
        let max_log = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tail_min_log = slice.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut lower, mut upper) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in window.0.max(1)..=n {
            let rate = log_capitals[m] / m as f64;
            lower = lower.min(rate);
            upper = upper.max(rate);
        }
        if n == 0 {
            lower = 0.0;
            upper = 0.0;
        }
        EvaluationTrace {
            prefix,
            n,
            log_capitals,
            window,
            max_log,
            tail_min_log,
            lower_exponent: lower,
            upper_exponent: upper,
        }
    }

    pub fn log_initial(&self) -> f64 {
        self.log_capitals[0]
    }

    /// CSV with columns `n,log_capital`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["n", "log_capital"])?;
        for (n, l) in self.log_capitals.iter().enumerate() {
            out.write_record([n.to_string(), l.to_string()])?;
        }
        csv_string(out)
    }
}

pub(crate) fn csv_string(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn evaluate(g: &SGale, prefix: &[Bit]) -> Result<EvaluationTrace> {
    if let Some(depth) = g.depth() {
        if prefix.len() > depth {
            return Err(Error::Precondition(format!(
                "prefix length {} exceeds rule depth {depth}",
                prefix.len()
            )));
        }
    }
    let logs = g.log_capitals_along(prefix)?;
    Ok(EvaluationTrace::from_log_capitals(prefix.to_vec(), logs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    Exact,
    Float,
}

/// Outcome of checking a node-local condition on every internal node up to a depth.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub depth: usize,
    pub tolerance: f64,
    pub nodes_checked: usize,
    pub failures: usize,
    /// Largest violation in capital units.
    pub worst_violation: f64,
    /// Largest violation relative to the capital at the node.
    pub worst_relative: f64,
    pub worst_node: Option<String>,
    pub passed: bool,
}

impl ValidationReport {
    pub(crate) fn new(mode: ValidationMode, depth: usize, tolerance: f64) -> Self {
        ValidationReport {
            mode,
            depth,
            tolerance: if mode == ValidationMode::Exact {
                0.0
            } else {
                tolerance
            },
            nodes_checked: 0,
            failures: 0,
            worst_violation: 0.0,
            worst_relative: 0.0,
            worst_node: None,
            passed: true,
        }
    }

    pub(crate) fn record(&mut self, w: &[Bit], violation: f64, relative: f64, failed: bool) {
        self.nodes_checked += 1;
        if failed {
            self.failures += 1;
        }
        let worse = relative > self.worst_relative
            || (relative == self.worst_relative && violation > self.worst_violation);
        if worse || (failed && self.failures == 1) {
            self.worst_relative = relative;
            self.worst_violation = violation;
            self.worst_node = Some(format_bits(w));
        }
    }

    pub(crate) fn finish(&mut self) {
        self.passed = self.failures == 0;
    }
}

/// Checks `d(w) = 2^-s (d(w0) + d(w1))` (gales) or `>=` (supergales) at all
/// `2^depth - 1` internal nodes.
pub fn validate(g: &SGale, depth: usize) -> Result<ValidationReport> {
    if let Some(limit) = g.depth() {
        if depth > limit {
            return Err(Error::Precondition(format!(
                "depth {depth} exceeds rule depth {limit}"
            )));
        }
    }
    if g.is_exact() && depth <= MAX_EXACT_DEPTH {
        validate_exact(g, depth)
    } else {
        validate_float(g, depth)
    }
}

fn exact_of(g: &dyn Capital, w: &[Bit]) -> Result<Surd> {
    g.exact_capital(w)?
        .ok_or_else(|| Error::Domain(format!("no exact capital at {:?}", format_bits(w))))
}

fn validate_exact(g: &SGale, depth: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(ValidationMode::Exact, depth, 0.0);
    let inv = Surd::pow2_halves(-g.s_halves().expect("exact gale"));
    let mut level: Vec<Surd> = vec![exact_of(g, &[])?];
    for len in 0..depth {
        let next: Vec<Surd> = strings_of_length(len + 1)
            .map(|w| exact_of(g, &w))
            .collect::<Result<_>>()?;
        for (idx, w) in strings_of_length(len).enumerate() {
            let d = &level[idx];
            let children = &next[2 * idx] + &next[2 * idx + 1];
            let rhs = &inv * &children;
            let diff = d - &rhs;
            let violation = match g.kind() {
                GaleKind::Gale => diff.abs(),
                GaleKind::Supergale if diff.is_negative() => -diff,
                GaleKind::Supergale => Surd::zero(),
            };
            let failed = !violation.is_zero();
            let v = violation.to_f64();
            let scale = d.to_f64().max(rhs.to_f64());
            let relative = if failed {
                if scale > 0.0 {
                    v / scale
                } else {
                    f64::INFINITY
                }
            } else {
                0.0
            };
            report.record(&w, v, relative, failed);
        }
        level = next;
    }
    report.finish();
    Ok(report)
}

fn validate_float(g: &SGale, depth: usize) -> Result<ValidationReport> {
    if depth > MAX_FLOAT_DEPTH {
        return Err(Error::Resource(format!(
            "float validation limited to depth {MAX_FLOAT_DEPTH}"
        )));
    }
    let mut report = ValidationReport::new(ValidationMode::Float, depth, FLOAT_TOLERANCE);
    let s = g.s();
    let mut level: Vec<f64> = vec![g.log_capital(&[])?];
    for len in 0..depth {
        let next: Vec<f64> = strings_of_length(len + 1)
            .map(|w| g.log_capital(&w))
            .collect::<Result<_>>()?;
        for (idx, w) in strings_of_length(len).enumerate() {
            let (l, l0, l1) = (level[idx], next[2 * idx], next[2 * idx + 1]);
            let (violation, relative) = if l == f64::NEG_INFINITY {
                let children = l0.exp2() + l1.exp2();
                let bad = children > 0.0;
                (
                    if bad { children * (-s).exp2() } else { 0.0 },
                    if bad { f64::INFINITY } else { 0.0 },
                )
            } else {
                // ratio = 2^-s (d(w0) + d(w1)) / d(w), the total fraction wagered
                let ratio = (l0 - l - s).exp2() + (l1 - l - s).exp2();
                let excess = match g.kind() {
                    GaleKind::Gale => (ratio - 1.0).abs(),
                    GaleKind::Supergale => (ratio - 1.0).max(0.0),
                };
                (excess * l.exp2(), excess / ratio.max(1.0))
            };
            report.record(&w, violation, relative, relative > FLOAT_TOLERANCE);
        }
        level = next;
    }
    report.finish();
    Ok(report)
}

/// `sum_{u in B} 2^{-s|u|} d(wu)` against `d(w)`.
#[derive(Clone, Debug, Serialize)]
pub struct KraftReport {
    pub sum: f64,
    pub capital: f64,
    /// `sum / d(w)`, computed in the log domain.
    pub ratio: f64,
    pub holds: bool,
    pub exact: bool,
}

pub fn kraft_sum(g: &SGale, set: &[Vec<Bit>], w: &[Bit]) -> Result<KraftReport> {
    check_prefix_set(set)?;
    if let (Some(depth), Some(longest)) = (g.depth(), set.iter().map(Vec::len).max()) {
        if w.len() + longest > depth {
            return Err(Error::Precondition(format!(
                "strings up to length {} exceed rule depth {depth}",
                w.len() + longest
            )));
        }
    }
    let extend = |u: &[Bit]| -> Vec<Bit> { w.iter().chain(u).copied().collect() };
    if let (true, Some(h)) = (g.is_exact(), g.s_halves()) {
        let d = exact_of(g, w)?;
        let mut sum = Surd::zero();
        for u in set {
            let term = exact_of(g, &extend(u))?;
            sum = sum + &Surd::pow2_halves(-h * u.len() as i64) * &term;
        }
        let ratio = if d.is_zero() {
            if sum.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            sum.to_f64() / d.to_f64()
        };
        return Ok(KraftReport {
            sum: sum.to_f64(),
            capital: d.to_f64(),
            ratio,
            holds: sum <= d,
            exact: true,
        });
    }
    let s = g.s();
    let lw = g.log_capital(w)?;
    let terms: Vec<f64> = set
        .iter()
        .map(|u| Ok(g.log_capital(&extend(u))? - s * u.len() as f64))
        .collect::<Result<_>>()?;
    let log_sum = log2_sum(terms);
    let ratio = if lw == f64::NEG_INFINITY {
        if log_sum == f64::NEG_INFINITY {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (log_sum - lw).exp2()
    };
    Ok(KraftReport {
        sum: log_sum.exp2(),
        capital: lw.exp2(),
        ratio,
        holds: ratio <= 1.0 + FLOAT_TOLERANCE,
        exact: false,
    })
}

#[derive(Debug)]
struct MixCapital {
    components: Vec<SGale>,
    log_weights: Vec<f64>,
    exact_weights: Option<Vec<Surd>>,
}

impl Capital for MixCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        let terms = self
            .components
            .iter()
            .zip(&self.log_weights)
            .map(|(g, lw)| Ok(lw + g.log_capital(w)?))
            .collect::<Result<Vec<f64>>>()?;
        Ok(log2_sum(terms))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some(weights) = &self.exact_weights else {
            return Ok(None);
        };
        let mut total = Surd::zero();
        for (g, weight) in self.components.iter().zip(weights) {
            let Some(d) = g.exact_capital(w)? else {
                return Ok(None);
            };
            total = total + weight * &d;
        }
        Ok(Some(total))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let traces = self
            .components
            .iter()
            .map(|g| g.log_capitals_along(prefix))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..=prefix.len())
            .map(|n| {
                log2_sum(
                    traces
                        .iter()
                        .zip(&self.log_weights)
                        .map(|(t, lw)| lw + t[n]),
                )
            })
            .collect())
    }

    fn depth(&self) -> Option<usize> {
        self.components.iter().filter_map(SGale::depth).min()
    }
}

/// `d(w) = sum_k c_k d_k(w)` with default weights `c_k = 2^-k / d_k(lambda)`.
pub fn mix(gales: &[SGale], weights: Option<&[f64]>) -> Result<SGale> {
    let first = gales
        .first()
        .ok_or_else(|| Error::Domain("mixture of no gales".into()))?;
    let s = first.s();
    if let Some(bad) = gales.iter().find(|g| g.s() != s) {
        return Err(Error::Domain(format!(
            "mixed exponents {s} and {}",
            bad.s()
        )));
    }
    let all_exact = gales.iter().all(SGale::is_exact);
    let (log_weights, exact_weights) = match weights {
        Some(ws) => {
            if ws.len() != gales.len() {
                return Err(Error::Domain(format!(
                    "{} weights for {} gales",
                    ws.len(),
                    gales.len()
                )));
            }
            if let Some(bad) = ws.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                return Err(Error::Domain(format!(
                    "weight {bad} is not a nonnegative number"
                )));
            }
            let exact = if all_exact {
                Some(
                    ws.iter()
                        .map(|&w| rational_from_f64(w).map(Surd::from_rational))
                        .collect::<Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            (ws.iter().map(|w| w.log2()).collect(), exact)
        }
        None => {
            let mut logs = Vec::with_capacity(gales.len());
            let mut exact = Vec::with_capacity(gales.len());
            for (k, g) in gales.iter().enumerate() {
                let initial = g.log_initial()?;
                if initial == f64::NEG_INFINITY {
                    return Err(Error::Domain(format!(
                        "component {k} has zero initial capital; default weight divides by it"
                    )));
                }
                logs.push(-(k as f64) - initial);
                if all_exact {
                    let d0 = exact_of(g, &[])?;
                    let inv = d0.recip().expect("nonzero initial capital");
                    exact.push(&Surd::pow2_halves(-2 * k as i64) * &inv);
                }
            }
            (logs, all_exact.then_some(exact))
        }
    };
    let kind = if gales.iter().all(|g| g.kind() == GaleKind::Gale) {
        GaleKind::Gale
    } else {
        GaleKind::Supergale
    };
    let capital = MixCapital {
        components: gales.to_vec(),
        log_weights,
        exact_weights,
    };
    SGale::new(s, kind, Arc::new(capital))
}

/// `d'(w) = 2^{-t|w|} d(w)`, an `(s - t)`-gale.
pub fn scale_exponent(g: &SGale, t: f64, allow_negative: bool) -> Result<SGale> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("shift {t} is not finite")));
    }
    let shifted = SGale {
        shift: g.shift + t,
        ..g.clone()
    };
    if shifted.s() < 0.0 && !allow_negative {
        return Err(Error::Domain(format!(
            "shift {t} would make the exponent negative ({})",
            shifted.s()
        )));
    }
    Ok(shifted)
}

#[derive(Debug)]
struct CoverCapital {
    n: usize,
    s: f64,
    s_prime: f64,
    halves: Option<(i64, i64)>,
    /// Number of strings of the cover extending each prefix.
    counts: HashMap<Vec<Bit>, u64>,
}

impl CoverCapital {
    fn count(&self, w: &[Bit]) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    fn log_at(&self, w: &[Bit]) -> f64 {
        let m = w.len().min(self.n);
        let c = self.count(&w[..m]);
        if c == 0 {
            return f64::NEG_INFINITY;
        }
        let base = (self.s - self.s_prime) * m as f64 - self.s_prime * (self.n - m) as f64
            + (c as f64).log2();
        base + (self.s - 1.0) * (w.len() - m) as f64
    }
}

impl Capital for CoverCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        Ok(self.log_at(w))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some((hs, hp)) = self.halves else {
            return Ok(None);
        };
        let m = w.len().min(self.n);
        let c = BigRational::from_integer(self.count(&w[..m]).into());
        let exponent =
            (hs - hp) * m as i64 - hp * (self.n - m) as i64 + (hs - 2) * (w.len() - m) as i64;
        Ok(Some(&Surd::pow2_halves(exponent) * &c))
    }
}

/// The cover gale for a set of strings of a common length `n`:
/// `d(w) = 2^{(s-s')|w|} sum_{wu in A} 2^{-s'|u|}` for `|w| <= n`, and
/// `d(w) = 2^{(s-1)(|w|-n)} d(w[0..n-1])` beyond.
pub fn cover_gale(set: &[Vec<Bit>], s: f64, s_prime: f64) -> Result<SGale> {
    if !(s > s_prime && s_prime > 0.0) {
        return Err(Error::Domain(format!(
            "need s > s' > 0, got s={s}, s'={s_prime}"
        )));
    }
    let n = set
        .first()
        .ok_or_else(|| Error::Domain("empty cover".into()))?
        .len();
    if let Some(bad) = set.iter().find(|w| w.len() != n) {
        return Err(Error::Structural(format!(
            "cover strings must share length {n}; found {:?}",
            format_bits(bad)
        )));
    }
    check_prefix_set(set)?;
    let mut counts: HashMap<Vec<Bit>, u64> = HashMap::new();
    for a in set {
        for m in 0..=n {
            *counts.entry(a[..m].to_vec()).or_default() += 1;
        }
    }
    let capital = CoverCapital {
        n,
        s,
        s_prime,
        halves: halves(s).zip(halves(s_prime)),
        counts,
    };
    SGale::new(s, GaleKind::Gale, Arc::new(capital))
}

/// One table entry: the bet on 0 (with `1 - bet0` on 1), or both bets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetEntry {
    Pair([Rat; 2]),
    Bet0(Rat),
}

impl BetEntry {
    fn pair(&self) -> [BigRational; 2] {
        match self {
            BetEntry::Bet0(b) => [b.0.clone(), BigRational::one() - &b.0],
            BetEntry::Pair([b0, b1]) => [b0.0.clone(), b1.0.clone()],
        }
    }
}

/// JSON form of a gale: `{"s": .., "kind": .., "rule": {"type": ..}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaleSpec {
    pub s: f64,
    #[serde(default)]
    pub kind: GaleKind,
    pub rule: RuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RuleSpec {
    Constant {
        bet0: Rat,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bet1: Option<Rat>,
    },
    Measure {
        bias: BiasSpec,
    },
    Cover {
        set: Vec<String>,
        s_prime: f64,
    },
    Table {
        bets: BTreeMap<String, BetEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<BetEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
}

impl GaleSpec {
    pub fn build(&self) -> Result<SGale> {
        let initial = self.initial.as_ref().map(|r| r.0.clone());
        let with_initial = |rule: Arc<dyn BetRule>| {
            SGale::from_bets(
                self.s,
                self.kind,
                initial.clone().unwrap_or_else(BigRational::one),
                rule,
            )
        };
        match &self.rule {
            RuleSpec::Constant { bet0, bet1 } => {
                let rule = match bet1 {
                    Some(b1) => ConstantBets::pair(bet0.0.clone(), b1.0.clone()),
                    None => ConstantBets::fair(bet0.0.clone()),
                };
                with_initial(Arc::new(rule))
            }
            RuleSpec::Measure { bias } => {
                let beta = bias.build()?;
                with_initial(Arc::new(MeasureBets { beta }))
            }
            RuleSpec::Cover { set, s_prime } => {
                if initial.is_some() {
                    return Err(Error::Parse(
                        "cover gales fix their own initial capital".into(),
                    ));
                }
                let strings = set
                    .iter()
                    .map(|w| parse_bits(w))
                    .collect::<Result<Vec<_>>>()?;
                Ok(cover_gale(&strings, self.s, *s_prime)?.with_kind(self.kind))
            }
            RuleSpec::Table {
                bets,
                default,
                depth,
            } => {
                let table = bets
                    .iter()
                    .map(|(w, e)| Ok((parse_bits(w)?, e.pair())))
                    .collect::<Result<HashMap<_, _>>>()?;
                let default = default.as_ref().map(BetEntry::pair).unwrap_or_else(|| {
                    [
                        BigRational::new(1.into(), 2.into()),
                        BigRational::new(1.into(), 2.into()),
                    ]
                });
                with_initial(Arc::new(TableBets::new(table, default, *depth)))
            }
        }
    }
}
