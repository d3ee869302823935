//! Bias sequences `beta_0, beta_1, ...`, their product measures, entropies,
//! self-information, and the large-deviation machinery built on them.

mod chernoff;
mod deviation;
mod rationalize;
mod rng;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bit;
use crate::constructions::tower::log_star;
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::gale::{Capital, ValidationMode, ValidationReport};
use crate::rational::{to_f64, Rat};

pub use chernoff::{chernoff_alpha, ChernoffParams, BETA_GRID_STEP};
pub use deviation::{
    deviation_tail_exact, deviation_tail_mc, ExactTail, McTail, DP_GRID_BITS, MAX_DP_LENGTH,
};
pub use rationalize::{rationalize, Approximator, RationalizationReport, Rationalized};
pub use rng::{trial_seed, BitSource};

/// Per-position head probabilities supplied by a closure-like object.
pub trait BiasFn: Send + Sync + fmt::Debug {
    fn beta(&self, i: u64) -> f64;
    fn beta_exact(&self, i: u64) -> Option<BigRational>;
    /// Declared `[lo, hi]` containing every value.
    fn bounds(&self) -> (f64, f64);
    fn tag(&self) -> String;
}

#[derive(Clone, Debug)]
struct Prob {
    exact: BigRational,
    value: f64,
}

impl Prob {
    fn new(exact: BigRational) -> Self {
        let value = to_f64(&exact);
        Prob { exact, value }
    }
}

#[derive(Clone, Debug)]
enum Schedule {
    Constant(Prob),
    Periodic(Vec<Prob>),
    /// Holds the last value beyond the end of the table.
    Table(Vec<Prob>),
    Tower {
        even: Prob,
        odd: Prob,
    },
    Custom(Arc<dyn BiasFn>),
}

/// A bias sequence with declared bounds `0 < lo <= beta_i <= hi < 1`.
#[derive(Clone, Debug)]
pub struct BiasSequence {
    schedule: Schedule,
    lo: f64,
    hi: f64,
}

/// JSON form of a bias schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BiasSpec {
    Constant { beta: Rat },
    Periodic { values: Vec<Rat> },
    Table { values: Vec<Rat> },
    Tower { kappa_even: Rat, kappa_odd: Rat },
}

impl BiasSpec {
    pub fn build(&self) -> Result<BiasSequence> {
        match self {
            BiasSpec::Constant { beta } => BiasSequence::constant(beta.0.clone()),
            BiasSpec::Periodic { values } => {
                BiasSequence::periodic(values.iter().map(|r| r.0.clone()).collect())
            }
            BiasSpec::Table { values } => {
                BiasSequence::table(values.iter().map(|r| r.0.clone()).collect())
            }
            BiasSpec::Tower {
                kappa_even,
                kappa_odd,
            } => BiasSequence::tower(kappa_even.0.clone(), kappa_odd.0.clone()),
        }
    }
}

fn check_open_unit(value: &BigRational) -> Result<Prob> {
    if *value <= BigRational::zero() || *value >= BigRational::one() {
        return Err(Error::Domain(format!("bias {value} is not in (0, 1)")));
    }
    Ok(Prob::new(value.clone()))
}

fn bounds_of(values: &[Prob]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.value), hi.max(p.value))
        })
}

impl BiasSequence {
    pub fn constant(beta: BigRational) -> Result<Self> {
        let p = check_open_unit(&beta)?;
        let (lo, hi) = (p.value, p.value);
        Ok(BiasSequence {
            schedule: Schedule::Constant(p),
            lo,
            hi,
        })
    }

    /// Convenience for `constant(num/den)`.
    pub fn constant_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::constant(BigRational::new(num.into(), den.into()))
    }

    pub fn periodic(values: Vec<BigRational>) -> Result<Self> {
        let probs = Self::checked(values)?;
        let (lo, hi) = bounds_of(&probs);
        Ok(BiasSequence {
            schedule: Schedule::Periodic(probs),
            lo,
            hi,
        })
    }

    pub fn table(values: Vec<BigRational>) -> Result<Self> {
        let probs = Self::checked(values)?;
        let (lo, hi) = bounds_of(&probs);
        Ok(BiasSequence {
            schedule: Schedule::Table(probs),
            lo,
            hi,
        })
    }

    /// `beta_n = kappa(log* n)` with `kappa` chosen by the parity of `log* n`.
    pub fn tower(kappa_even: BigRational, kappa_odd: BigRational) -> Result<Self> {
        let even = check_open_unit(&kappa_even)?;
        let odd = check_open_unit(&kappa_odd)?;
        let (lo, hi) = bounds_of(&[even.clone(), odd.clone()]);
        Ok(BiasSequence {
            schedule: Schedule::Tower { even, odd },
            lo,
            hi,
        })
    }

    pub fn custom(source: Arc<dyn BiasFn>) -> Result<Self> {
        let (lo, hi) = source.bounds();
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(Error::Domain(format!(
                "declared bounds [{lo}, {hi}] not inside (0, 1)"
            )));
        }
        Ok(BiasSequence {
            schedule: Schedule::Custom(source),
            lo,
            hi,
        })
    }

    fn checked(values: Vec<BigRational>) -> Result<Vec<Prob>> {
        if values.is_empty() {
            return Err(Error::Domain("empty bias table".into()));
        }
        values.iter().map(check_open_unit).collect()
    }

    pub fn beta(&self, i: u64) -> f64 {
        match &self.schedule {
            Schedule::Constant(p) => p.value,
            Schedule::Periodic(v) => v[(i % v.len() as u64) as usize].value,
            Schedule::Table(v) => v[(i as usize).min(v.len() - 1)].value,
            Schedule::Tower { even, odd } => {
                if log_star(i as u128).is_multiple_of(2) {
                    even.value
                } else {
                    odd.value
                }
            }
            Schedule::Custom(f) => f.beta(i),
        }
    }

    fn prob_wide(&self, i: Option<u128>) -> Option<&Prob> {
        match (&self.schedule, i) {
            (Schedule::Constant(p), _) => Some(p),
            (Schedule::Periodic(v), Some(i)) => Some(&v[(i % v.len() as u128) as usize]),
            (Schedule::Table(v), Some(i)) => Some(&v[(i.min(v.len() as u128 - 1)) as usize]),
            (Schedule::Table(v), None) => v.last(),
            (Schedule::Tower { even, odd }, Some(i)) => Some(if log_star(i).is_multiple_of(2) {
                even
            } else {
                odd
            }),
            // log* of anything beyond u128 is 5
            (Schedule::Tower { odd, .. }, None) => Some(odd),
            _ => None,
        }
    }

    /// `beta_i` for indices beyond `u64`; `None` (meaning above `u128::MAX`)
    /// is answered only by schedules that are eventually constant. Custom
    /// schedules answer only for indices that fit in `u64`.
    pub fn beta_wide(&self, i: Option<u128>) -> Option<f64> {
        if let (Schedule::Custom(f), Some(i)) = (&self.schedule, i) {
            return u64::try_from(i).ok().map(|i| f.beta(i));
        }
        self.prob_wide(i).map(|p| p.value)
    }

    pub fn beta_exact_wide(&self, i: Option<u128>) -> Option<BigRational> {
        if let (Schedule::Custom(f), Some(i)) = (&self.schedule, i) {
            return u64::try_from(i).ok().and_then(|i| f.beta_exact(i));
        }
        self.prob_wide(i).map(|p| p.exact.clone())
    }

    pub fn beta_exact(&self, i: u64) -> Option<BigRational> {
        match &self.schedule {
            Schedule::Constant(p) => Some(p.exact.clone()),
            Schedule::Periodic(v) => Some(v[(i % v.len() as u64) as usize].exact.clone()),
            Schedule::Table(v) => Some(v[(i as usize).min(v.len() - 1)].exact.clone()),
            Schedule::Tower { even, odd } => Some(if log_star(i as u128).is_multiple_of(2) {
                even.exact.clone()
            } else {
                odd.exact.clone()
            }),
            Schedule::Custom(f) => f.beta_exact(i),
        }
    }

    /// Declared `[lo, hi]`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// The `delta` with every `beta_i` in `[delta, 1 - delta]`.
    pub fn delta(&self) -> f64 {
        self.lo.min(1.0 - self.hi)
    }

    pub fn tag(&self) -> String {
        match &self.schedule {
            Schedule::Constant(_) => "constant".into(),
            Schedule::Periodic(_) => "periodic".into(),
            Schedule::Table(_) => "table".into(),
            Schedule::Tower { .. } => "tower".into(),
            Schedule::Custom(f) => f.tag(),
        }
    }

    pub fn spec(&self) -> Option<BiasSpec> {
        let rats = |v: &[Prob]| v.iter().map(|p| Rat(p.exact.clone())).collect();
        match &self.schedule {
            Schedule::Constant(p) => Some(BiasSpec::Constant {
                beta: Rat(p.exact.clone()),
            }),
            Schedule::Periodic(v) => Some(BiasSpec::Periodic { values: rats(v) }),
            Schedule::Table(v) => Some(BiasSpec::Table { values: rats(v) }),
            Schedule::Tower { even, odd } => Some(BiasSpec::Tower {
                kappa_even: Rat(even.exact.clone()),
                kappa_odd: Rat(odd.exact.clone()),
            }),
            Schedule::Custom(_) => None,
        }
    }

    /// Probability of bit `b` at position `i`.
    pub fn prob_of(&self, i: u64, b: Bit) -> f64 {
        let beta = self.beta(i);
        if b == 1 {
            beta
        } else {
            1.0 - beta
        }
    }

    pub fn prob_of_exact(&self, i: u64, b: Bit) -> Option<BigRational> {
        let beta = self.beta_exact(i)?;
        Some(if b == 1 {
            beta
        } else {
            BigRational::one() - beta
        })
    }

    /// Self-information `xi_i` of bit `b` at position `i`, in bits.
    pub fn xi(&self, i: u64, b: Bit) -> f64 {
        -self.prob_of(i, b).log2()
    }
}

/// Binary Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(beta: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(beta) + term(1.0 - beta)
}

/// `H_n = (1/n) sum_{i<n} H(beta_i)`.
pub fn avg_entropy(beta: &BiasSequence, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("average entropy needs n >= 1".into()));
    }
    Ok(entropy_sum(beta, n) / n as f64)
}

/// `n H_n`.
pub fn entropy_sum(beta: &BiasSequence, n: usize) -> f64 {
    (0..n as u64).map(|i| shannon_entropy(beta.beta(i))).sum()
}

/// Running envelope of `H_m` over the window `[ceil(n/2), n]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyEnvelope {
    pub n: usize,
    pub window: (usize, usize),
    pub average: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn entropy_envelope(beta: &BiasSequence, n: usize) -> Result<EntropyEnvelope> {
    if n == 0 {
        return Err(Error::Domain("average entropy needs n >= 1".into()));
    }
    let start = n.div_ceil(2).max(1);
    let mut sum = 0.0;
    let (mut lower, mut upper) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in 1..=n {
        sum += shannon_entropy(beta.beta(m as u64 - 1));
        if m >= start {
            let h = sum / m as f64;
            lower = lower.min(h);
            upper = upper.max(h);
        }
    }
    Ok(EntropyEnvelope {
        n,
        window: (start, n),
        average: sum / n as f64,
        lower,
        upper,
    })
}

/// `log2 mu^beta(w)`.
pub fn measure(beta: &BiasSequence, w: &[Bit]) -> f64 {
    -w.iter()
        .enumerate()
        .map(|(i, &b)| beta.xi(i as u64, b))
        .sum::<f64>()
}

/// `mu^beta(w)` exactly, when the sequence has rational values.
pub fn measure_exact(beta: &BiasSequence, w: &[Bit]) -> Option<BigRational> {
    let mut acc = BigRational::one();
    for (i, &b) in w.iter().enumerate() {
        acc *= beta.prob_of_exact(i as u64, b)?;
    }
    Some(acc)
}

/// `d(w) = mu^gamma(w) / mu^beta(w)`, a beta-martingale.
#[derive(Clone, Debug)]
pub struct LikelihoodRatio {
    gamma: BiasSequence,
    beta: BiasSequence,
}

impl LikelihoodRatio {
    pub fn new(gamma: BiasSequence, beta: BiasSequence) -> Result<Self> {
        let (lo, hi) = beta.bounds();
        if !(lo > 0.0 && hi < 1.0) {
            return Err(Error::Domain(format!(
                "denominator bounds [{lo}, {hi}] touch 0 or 1"
            )));
        }
        Ok(LikelihoodRatio { gamma, beta })
    }
}

impl Capital for LikelihoodRatio {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        Ok(measure(&self.gamma, w) - measure(&self.beta, w))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        Ok(measure_exact(&self.gamma, w)
            .zip(measure_exact(&self.beta, w))
            .map(|(g, b)| Surd::from_rational(g / b)))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(prefix.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        for (i, &b) in prefix.iter().enumerate() {
            acc += self.beta.xi(i as u64, b) - self.gamma.xi(i as u64, b);
            out.push(acc);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfInfoStats {
    pub n: usize,
    /// `L_n = -log2 mu^beta(prefix)`.
    pub self_information: f64,
    /// `H_n`, or 0 for the empty prefix.
    pub avg_entropy: f64,
    /// `L_n - n H_n`.
    pub deviation: f64,
}

pub fn self_information(beta: &BiasSequence, prefix: &[Bit]) -> SelfInfoStats {
    let n = prefix.len();
    let self_information = -measure(beta, prefix);
    let total_entropy = entropy_sum(beta, n);
    SelfInfoStats {
        n,
        self_information,
        avg_entropy: if n == 0 {
            0.0
        } else {
            total_entropy / n as f64
        },
        deviation: self_information - total_entropy,
    }
}

/// Deterministic sample of `n` bits: bit `i` is 1 with probability `beta_i`.
pub fn sample_sequence(beta: &BiasSequence, n: usize, seed: u64) -> Vec<Bit> {
    let mut source = BitSource::new(seed);
    (0..n as u64)
        .map(|i| source.bernoulli(beta.beta(i)))
        .collect()
}

/// Checks the beta-martingale condition `d(w) = (1 - beta_|w|) d(w0) + beta_|w| d(w1)`
/// at every internal node of depth `< depth`.
pub fn validate_beta_martingale(
    capital: &dyn Capital,
    beta: &BiasSequence,
    depth: usize,
    tolerance: f64,
) -> Result<ValidationReport> {
    let exact = depth <= 16
        && capital.exact_capital(&[])?.is_some()
        && (0..depth as u64).all(|i| beta.beta_exact(i).is_some());
    let mut report = ValidationReport::new(
        if exact {
            ValidationMode::Exact
        } else {
            ValidationMode::Float
        },
        depth,
        tolerance,
    );
    let mut stack: Vec<Vec<Bit>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() >= depth {
            continue;
        }
        let i = w.len() as u64;
        let mut w0 = w.clone();
        w0.push(0);
        let mut w1 = w.clone();
        w1.push(1);
        if exact {
            let get = |x: &[Bit]| -> Result<Surd> {
                capital
                    .exact_capital(x)?
                    .ok_or_else(|| Error::Domain("exact capital unavailable".into()))
            };
            let (d, d0, d1) = (get(&w)?, get(&w0)?, get(&w1)?);
            let b = beta.beta_exact(i).expect("checked above");
            let rhs = &(&d0 * &(BigRational::one() - &b)) + &(&d1 * &b);
            let diff = (&d - &rhs).abs();
            let failed = !diff.is_zero();
            report.record(
                &w,
                diff.to_f64(),
                if failed { f64::INFINITY } else { 0.0 },
                failed,
            );
        } else {
            let (l, l0, l1) = (
                capital.log_capital(&w)?,
                capital.log_capital(&w0)?,
                capital.log_capital(&w1)?,
            );
            let b = beta.beta(i);
            let (violation, relative) = if l == f64::NEG_INFINITY {
                let rhs = (1.0 - b) * l0.exp2() + b * l1.exp2();
                (rhs, if rhs > 0.0 { f64::INFINITY } else { 0.0 })
            } else {
                let r = (1.0 - b) * (l0 - l).exp2() + b * (l1 - l).exp2();
                ((1.0 - r).abs() * l.exp2(), (1.0 - r).abs() / r.max(1.0))
            };
            report.record(&w, violation, relative, relative > tolerance);
        }
        stack.push(w0);
        stack.push(w1);
    }
    report.finish();
    Ok(report)
}

impl fmt::Display for BiasSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:.6}, {:.6}]", self.tag(), self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon_entropy(0.5), 1.0);
        assert_eq!(shannon_entropy(0.0), 0.0);
        assert_eq!(shannon_entropy(1.0), 0.0);
        // -(1/4) log2(1/4) - (3/4) log2(3/4) = 1/2 + (3/4)(2 - log2 3)
        let oracle = 0.5 + 0.75 * (2.0 - 3f64.log2());
        assert!((shannon_entropy(0.25) - oracle).abs() < 1e-15);
        assert!((shannon_entropy(0.25) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn average_entropies() {
        let c = BiasSequence::constant_ratio(1, 4).unwrap();
        for n in [1, 7, 100] {
            assert!((avg_entropy(&c, n).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        }
        let t = BiasSequence::table(vec![q(1, 2), q(1, 4)]).unwrap();
        assert!((avg_entropy(&t, 2).unwrap() - 0.905_639_062_229_566_4).abs() < 1e-12);
        let fair = BiasSequence::constant_ratio(1, 2).unwrap();
        assert_eq!(avg_entropy(&fair, 33).unwrap(), 1.0);
        assert!(avg_entropy(&fair, 0).is_err());
    }

    #[test]
    fn envelope_brackets_the_window() {
        let t = BiasSequence::periodic(vec![q(1, 2), q(1, 10)]).unwrap();
        let env = entropy_envelope(&t, 10).unwrap();
        assert_eq!(env.window, (5, 10));
        assert!(env.lower <= env.average && env.average <= env.upper);
        let h5 = avg_entropy(&t, 5).unwrap();
        assert!((env.upper - h5).abs() < 1e-12);
    }

    #[test]
    fn measures() {
        let fair = BiasSequence::constant_ratio(1, 2).unwrap();
        assert_eq!(measure(&fair, &parse_bits("01101").unwrap()), -5.0);
        let quarter = BiasSequence::constant_ratio(1, 4).unwrap();
        let got = measure(&quarter, &parse_bits("10").unwrap());
        assert!((got - (0.25f64 * 0.75).log2()).abs() < 1e-12);
        assert!((got + 2.415_037_499_278_844).abs() < 1e-12);
        assert_eq!(measure(&quarter, &[]), 0.0);
        assert_eq!(
            measure_exact(&quarter, &parse_bits("10").unwrap()),
            Some(q(3, 16))
        );
    }

    #[test]
    fn self_information_examples() {
        let fair = BiasSequence::constant_ratio(1, 2).unwrap();
        let s = self_information(&fair, &parse_bits("0110").unwrap());
        assert_eq!((s.self_information, s.deviation), (4.0, 0.0));

        let quarter = BiasSequence::constant_ratio(1, 4).unwrap();
        let s = self_information(&quarter, &parse_bits("1111").unwrap());
        assert!((s.self_information - 8.0).abs() < 1e-12);
        assert!((s.avg_entropy - 0.8113).abs() < 1e-4);
        assert!((s.deviation - 4.7549).abs() < 1e-4);
    }

    #[test]
    fn expected_self_information_by_enumeration() {
        // E[L_n] = n H_n, computed by summing over all 2^n strings
        let beta = BiasSequence::table(vec![q(1, 3), q(1, 5), q(7, 8), q(1, 2), q(2, 3)]).unwrap();
        let n = 5;
        let mut expectation = 0.0;
        for w in crate::bits::strings_of_length(n) {
            expectation += measure(&beta, &w).exp2() * -measure(&beta, &w);
        }
        assert!((expectation - entropy_sum(&beta, n)).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_biases() {
        assert!(BiasSequence::constant_ratio(1, 1).is_err());
        assert!(BiasSequence::constant_ratio(0, 1).is_err());
        assert!(BiasSequence::table(vec![]).is_err());
        assert!(BiasSequence::table(vec![q(1, 2), q(3, 2)]).is_err());
    }

    #[test]
    fn sampling() {
        let quarter = BiasSequence::constant_ratio(1, 4).unwrap();
        assert!(sample_sequence(&quarter, 0, 1).is_empty());
        let a = sample_sequence(&quarter, 1000, 42);
        assert_eq!(a, sample_sequence(&quarter, 1000, 42));
        assert_ne!(a, sample_sequence(&quarter, 1000, 43));
    }

    #[test]
    fn sampled_frequency_matches_bias() {
        let quarter = BiasSequence::constant_ratio(1, 4).unwrap();
        let n = 1_000_000;
        let ones = sample_sequence(&quarter, n, 2024)
            .iter()
            .filter(|&&b| b == 1)
            .count();
        assert!((ones as f64 / n as f64 - 0.25).abs() < 0.002);
    }

    #[test]
    fn tower_schedule_follows_log_star_parity() {
        let t = BiasSequence::tower(q(1, 4), q(1, 2)).unwrap();
        // log* : 1 -> 0, 2 -> 1, 3..4 -> 2, 5..16 -> 3, 17.. -> 4
        assert_eq!(t.beta(1), 0.25);
        assert_eq!(t.beta(2), 0.5);
        assert_eq!(t.beta(4), 0.25);
        assert_eq!(t.beta(16), 0.5);
        assert_eq!(t.beta(17), 0.25);
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"type":"tower","kappa_even":"1/4","kappa_odd":"1/3"}"#;
        let spec: BiasSpec = serde_json::from_str(json).unwrap();
        let seq = spec.build().unwrap();
        assert_eq!(seq.spec().unwrap(), spec);
        let spec: BiasSpec = serde_json::from_str(r#"{"type":"constant","beta":"1/4"}"#).unwrap();
        assert_eq!(spec.build().unwrap().beta(9), 0.25);
    }

    proptest! {
        #[test]
        fn measure_splits_exactly(w in prop::collection::vec(0u8..2, 0..12),
                                  nums in prop::collection::vec(1i64..16, 1..6)) {
            let beta = BiasSequence::periodic(nums.iter().map(|&n| q(n, 16)).collect()).unwrap();
            let mut w0 = w.clone(); w0.push(0);
            let mut w1 = w.clone(); w1.push(1);
            let lhs = measure_exact(&beta, &w0).unwrap() + measure_exact(&beta, &w1).unwrap();
            prop_assert_eq!(lhs, measure_exact(&beta, &w).unwrap());
        }

        #[test]
        fn incremental_self_information_matches_measure(w in prop::collection::vec(0u8..2, 0..200)) {
            let beta = BiasSequence::periodic(vec![q(1, 3), q(5, 7)]).unwrap();
            let mut running = 0.0;
            for (i, &b) in w.iter().enumerate() {
                running += beta.xi(i as u64, b);
            }
            prop_assert!((running + measure(&beta, &w)).abs() < 1e-9);
        }
    }
}
