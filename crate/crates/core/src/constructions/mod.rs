//! Explicit objects: sequences with separated dimension and strong dimension,
//! self-similar sets with their Kraft root and supergale, box counts, and
//! entropy rates.

pub mod tower;

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bias::BitSource;
use crate::bits::{check_prefix_set, format_bits, parse_bits, Bit};
use crate::error::{Error, Result};
use crate::exact::{halves, Surd};
use crate::gale::{csv_string, Capital, GaleKind, SGale};
use crate::logspace::log2_sum;
use crate::rational::{to_f64, Rat};

use tower::{log_log, log_star};

/// Which function of the block index decides the padding parity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParitySchedule {
    /// `log* n`.
    #[default]
    Logstar,
    /// `floor(log2 log2 n)`. Not the construction's own schedule; it makes the
    /// alternation visible at lengths that can actually be generated.
    Fast,
}

impl ParitySchedule {
    pub fn driver(self, n: u64) -> u32 {
        match self {
            ParitySchedule::Logstar => log_star(n as u128),
            ParitySchedule::Fast => log_log(n as u128),
        }
    }
}

/// `S = r_1 0^{k_1} r_2 0^{k_2} ...` with `|r_n| = 2n - 1` random bits and
/// `k_n = ceil(|r_n| gamma_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularitySpec {
    pub alpha: Rat,
    pub beta: Rat,
    pub seed: u64,
    #[serde(default)]
    pub schedule: ParitySchedule,
}

impl RegularitySpec {
    pub fn check(&self) -> Result<()> {
        let (a, b) = (&self.alpha.0, &self.beta.0);
        if !a.is_positive() {
            return Err(Error::Domain(format!("alpha must be positive, got {a}")));
        }
        if a > b || b > &BigRational::one() {
            return Err(Error::Domain(format!(
                "need 0 < alpha <= beta <= 1, got {a}, {b}"
            )));
        }
        Ok(())
    }

    /// `(1 - alpha)/alpha` when the driver is odd, `(1 - beta)/beta` when even.
    pub fn gamma(&self, n: u64) -> BigRational {
        let x = if self.schedule.driver(n) % 2 == 1 {
            &self.alpha.0
        } else {
            &self.beta.0
        };
        (BigRational::one() - x) / x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockRecord {
    pub n: u64,
    /// `|r_n|`.
    pub r_len: u64,
    pub driver: u32,
    pub gamma: Rat,
    /// Zero padding `k_n`.
    pub k: u64,
    /// `|r_1 ... r_n|`.
    pub random_total: u64,
    /// `|r_1 0^{k_1} ... r_n 0^{k_n}|`.
    pub end: u64,
}

fn ceil_rational(x: &BigRational) -> BigUint {
    let (q, r) = x.numer().div_rem(x.denom());
    let q = if r.is_positive() { q + 1 } else { q };
    q.to_biguint().expect("nonnegative ceiling")
}

fn block(spec: &RegularitySpec, n: u64, prev: Option<&BlockRecord>) -> BlockRecord {
    let r_len = 2 * n - 1;
    let gamma = spec.gamma(n);
    let k = ceil_rational(&(&gamma * BigRational::from_integer(r_len.into())))
        .to_u64()
        .expect("padding fits in u64");
    let (random_before, end_before) = prev.map_or((0, 0), |p| (p.random_total, p.end));
    BlockRecord {
        n,
        r_len,
        driver: spec.schedule.driver(n),
        gamma: Rat(gamma),
        k,
        random_total: random_before + r_len,
        end: end_before + r_len + k,
    }
}

/// Block records `1..=blocks` without generating any bits.
pub fn regularity_ledger(spec: &RegularitySpec, blocks: u64) -> Result<Vec<BlockRecord>> {
    spec.check()?;
    let mut out: Vec<BlockRecord> = Vec::with_capacity(blocks as usize);
    for n in 1..=blocks {
        let record = block(spec, n, out.last());
        out.push(record);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RegularityPrefix {
    pub bits: Vec<Bit>,
    /// Every block that contributed at least one bit; the last may be cut short.
    pub ledger: Vec<BlockRecord>,
}

/// First `target` bits of `S`; the `r_n` are read from the fair-coin stream
/// of [`BitSource`] seeded with `spec.seed`.
pub fn build_regularity_prefix(spec: &RegularitySpec, target: usize) -> Result<RegularityPrefix> {
    spec.check()?;
    if target == 0 {
        return Err(Error::Domain("target length must be at least 1".into()));
    }
    let mut source = BitSource::new(spec.seed);
    let mut bits = Vec::with_capacity(target);
    let mut ledger: Vec<BlockRecord> = Vec::new();
    let mut n = 0;
    while bits.len() < target {
        n += 1;
        let record = block(spec, n, ledger.last());
        for _ in 0..record.r_len {
            if bits.len() == target {
                break;
            }
            bits.push(source.bernoulli(0.5));
        }
        let pad = (record.k as usize).min(target - bits.len());
        bits.resize(bits.len() + pad, 0);
        ledger.push(record);
    }
    Ok(RegularityPrefix { bits, ledger })
}

/// `(1/beta)(n-1)^2 <= |w| <= (1/alpha)(n+1)^2` at each block boundary.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub blocks: usize,
    pub passed: bool,
    pub first_failure: Option<u64>,
    /// Smallest `|w| - (n-1)^2/beta`.
    pub lower_margin: f64,
    /// Smallest `(n+1)^2/alpha - |w|`.
    pub upper_margin: f64,
    /// Every block has `|r_n| = 2n - 1`, `|r_1..r_n| = n^2`, and `gamma_n`
    /// matching the parity rule.
    pub structure_ok: bool,
}

pub fn sandwich_check(spec: &RegularitySpec, ledger: &[BlockRecord]) -> SandwichReport {
    let inv_alpha = BigRational::one() / &spec.alpha.0;
    let inv_beta = BigRational::one() / &spec.beta.0;
    let mut report = SandwichReport {
        blocks: ledger.len(),
        passed: true,
        first_failure: None,
        lower_margin: f64::INFINITY,
        upper_margin: f64::INFINITY,
        structure_ok: true,
    };
    for record in ledger {
        let n = record.n;
        let len = BigRational::from_integer(record.end.into());
        let square = |m: u64| BigRational::from_integer((m * m).into());
        let lower = &len - &inv_beta * square(n - 1);
        let upper = &inv_alpha * square(n + 1) - &len;
        report.lower_margin = report.lower_margin.min(to_f64(&lower));
        report.upper_margin = report.upper_margin.min(to_f64(&upper));
        if (lower.is_negative() || upper.is_negative()) && report.first_failure.is_none() {
            report.passed = false;
            report.first_failure = Some(n);
        }
        let gamma = spec.gamma(n);
        let k = ceil_rational(&(&gamma * BigRational::from_integer(record.r_len.into())));
        if record.r_len != 2 * n - 1
            || record.random_total != n * n
            || record.gamma.0 != gamma
            || record.driver != spec.schedule.driver(n)
            || BigUint::from(record.k) != k
        {
            report.structure_ok = false;
        }
    }
    report
}

/// CSV with columns `n,r_len,driver,gamma,k,random_total,end`.
pub fn ledger_csv(ledger: &[BlockRecord]) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["n", "r_len", "driver", "gamma", "k", "random_total", "end"])?;
    for r in ledger {
        out.write_record([
            r.n.to_string(),
            r.r_len.to_string(),
            r.driver.to_string(),
            r.gamma.to_string(),
            r.k.to_string(),
            r.random_total.to_string(),
            r.end.to_string(),
        ])?;
    }
    csv_string(out)
}

/// A finite prefix set `A` of nonempty strings; its infinite concatenations form `A^inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilarSystem {
    strings: Vec<Vec<Bit>>,
    /// Trie of `A`: `children[node][b]`, 0 meaning absent.
    children: Vec<[usize; 2]>,
    leaf: Vec<bool>,
}

impl SelfSimilarSystem {
    pub fn new(mut strings: Vec<Vec<Bit>>) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::Domain("empty string set".into()));
        }
        if strings.iter().any(Vec::is_empty) {
            return Err(Error::Structural("the empty string is not allowed".into()));
        }
        check_prefix_set(&strings)?;
        strings.sort();
        let mut children = vec![[0usize; 2]];
        let mut leaf = vec![false];
        for w in &strings {
            let mut node = 0;
            for &b in w {
                if children[node][b as usize] == 0 {
                    children.push([0, 0]);
                    leaf.push(false);
                    children[node][b as usize] = children.len() - 1;
                }
                node = children[node][b as usize];
            }
            leaf[node] = true;
        }
        Ok(SelfSimilarSystem {
            strings,
            children,
            leaf,
        })
    }

    pub fn parse(items: &[String]) -> Result<Self> {
        Self::new(items.iter().map(|s| parse_bits(s)).collect::<Result<_>>()?)
    }

    pub fn strings(&self) -> &[Vec<Bit>] {
        &self.strings
    }

    /// `sum_{w in A} 2^{-s|w|}`.
    pub fn kraft(&self, s: f64) -> f64 {
        self.strings
            .iter()
            .map(|w| (-s * w.len() as f64).exp2())
            .sum()
    }

    /// Splits `w` as `v r` where `v` is the longest composite proper prefix
    /// (`lambda` for `w = lambda`). Returns `None` when `r` is not a prefix
    /// of any element of `A`.
    fn split<'a>(&self, w: &'a [Bit]) -> Option<(usize, &'a [Bit])> {
        let mut start = 0;
        let mut node = 0;
        for (i, &b) in w.iter().enumerate() {
            let next = self.children[node][b as usize];
            if next == 0 {
                return None;
            }
            if self.leaf[next] && i + 1 < w.len() {
                start = i + 1;
                node = 0;
            } else {
                node = next;
            }
        }
        Some((start, &w[start..]))
    }

    /// True when `w` is a concatenation of elements of `A`.
    pub fn is_composite(&self, w: &[Bit]) -> bool {
        match self.split(w) {
            _ if w.is_empty() => true,
            Some((_, r)) => self.strings.binary_search(&r.to_vec()).is_ok(),
            None => false,
        }
    }

    /// `w` repeating `A` in sorted order, cut to `n` bits.
    pub fn round_robin(&self, n: usize) -> Vec<Bit> {
        self.strings
            .iter()
            .cycle()
            .flatten()
            .copied()
            .take(n)
            .collect()
    }
}

/// Least `s` with `sum_{w in A} 2^{-s|w|} <= 1`, by bisection to `1e-9`.
pub fn selfsimilar_dimension(system: &SelfSimilarSystem) -> f64 {
    if system.strings.len() <= 1 {
        return 0.0;
    }
    let longest = system.strings.iter().map(Vec::len).max().unwrap_or(1) as f64;
    let (mut lo, mut hi) = (0.0f64, (system.strings.len() as f64).log2() + longest);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        let k = system.kraft(mid);
        if k == 1.0 {
            return mid;
        }
        if k < 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Debug)]
struct SelfSimilarCapital {
    system: SelfSimilarSystem,
    s: f64,
    eps: f64,
    halves: Option<(i64, i64)>,
}

impl SelfSimilarCapital {
    /// Elements of `A` extending `r`, as their lengths.
    fn extensions(&self, r: &[Bit]) -> Vec<usize> {
        self.system
            .strings
            .iter()
            .filter(|u| u.len() >= r.len() && &u[..r.len()] == r)
            .map(Vec::len)
            .collect()
    }

    fn remainder<'a>(&self, w: &'a [Bit]) -> Option<&'a [Bit]> {
        if w.is_empty() {
            return None;
        }
        self.system.split(w).map(|(_, r)| r)
    }
}

impl Capital for SelfSimilarCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        let growth = self.eps * w.len() as f64;
        if w.is_empty() {
            return Ok(0.0);
        }
        let Some(r) = self.remainder(w) else {
            return Ok(f64::NEG_INFINITY);
        };
        let terms = self
            .extensions(r)
            .into_iter()
            .map(|len| -self.s * (len - r.len()) as f64);
        Ok(growth + log2_sum(terms))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some((hs, he)) = self.halves else {
            return Ok(None);
        };
        if w.is_empty() {
            return Ok(Some(Surd::one()));
        }
        let Some(r) = self.remainder(w) else {
            return Ok(Some(Surd::zero()));
        };
        let growth = Surd::pow2_halves(he * w.len() as i64);
        let sum: Surd = self
            .extensions(r)
            .into_iter()
            .map(|len| Surd::pow2_halves(-hs * (len - r.len()) as i64))
            .sum();
        Ok(Some(&growth * &sum))
    }
}

/// The `(s + eps)`-supergale `d(w) = 2^{eps|w|} sum_{u in A, r <= u} 2^{-s(|u| - |r|)}`
/// where `w = v r` and `v` is the longest composite proper prefix of `w`,
/// with `d(lambda) = 1`. It equals `2^{eps|w|}` on composite strings.
pub fn selfsimilar_supergale(system: &SelfSimilarSystem, s: f64, eps: f64) -> Result<SGale> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("s must be nonnegative, got {s}")));
    }
    let kraft = system.kraft(s);
    if kraft > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "Kraft sum {kraft} exceeds 1 at s = {s}"
        )));
    }
    let capital = SelfSimilarCapital {
        system: system.clone(),
        s,
        eps,
        halves: halves(s).zip(halves(eps)),
    };
    SGale::new(s + eps, GaleKind::Supergale, Arc::new(capital))
}

/// `N_n(A^inf)`, the number of length-`n` prefixes of sequences in `A^inf`,
/// for every `n` in `0..=max_n`.
pub fn box_counts(system: &SelfSimilarSystem, max_n: usize) -> Vec<BigUint> {
    let nodes = system.children.len();
    let mut counts = vec![BigUint::zero(); nodes];
    counts[0] = BigUint::one();
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(BigUint::one());
    for _ in 0..max_n {
        let mut next = vec![BigUint::zero(); nodes];
        for (node, count) in counts.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for child in system.children[node] {
                if child != 0 {
                    let target = if system.leaf[child] { 0 } else { child };
                    next[target] += count;
                }
            }
        }
        counts = next;
        out.push(counts.iter().sum());
    }
    out
}

pub fn box_count(system: &SelfSimilarSystem, n: usize) -> BigUint {
    box_counts(system, n).pop().expect("nonempty")
}

pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits") as f64;
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits") as f64;
    top.log2() + shift as f64
}

/// `max log2 |A_{=n}| / n` over `n` in `window`, skipping zero counts and `n = 0`.
pub fn entropy_rate(counts: &[BigUint], window: (usize, usize)) -> Result<f64> {
    if window.0 > window.1 || window.1 >= counts.len() {
        return Err(Error::Domain(format!(
            "window {window:?} not covered by {} counts",
            counts.len()
        )));
    }
    let rate = (window.0.max(1)..=window.1)
        .filter(|&n| !counts[n].is_zero())
        .map(|n| log2_count(&counts[n]) / n as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(rate)
}

fn log2_count(x: &BigUint) -> f64 {
    let l = log2_biguint(x);
    if x.bits() <= 64 {
        l.log2()
    } else {
        l
    }
}

/// Readable form of `A` for reports.
pub fn describe_system(system: &SelfSimilarSystem) -> Vec<String> {
    system.strings.iter().map(|w| format_bits(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::{sample_sequence, BiasSequence};
    use crate::bits::strings_of_length;
    use crate::gale::{evaluate, validate};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn spec(a: (i64, i64), b: (i64, i64), schedule: ParitySchedule) -> RegularitySpec {
        RegularitySpec {
            alpha: Rat::new(a.0, a.1),
            beta: Rat::new(b.0, b.1),
            seed: 11,
            schedule,
        }
    }

    fn system(items: &[&str]) -> SelfSimilarSystem {
        SelfSimilarSystem::new(items.iter().map(|s| parse_bits(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn unpadded_sequence_is_the_raw_stream() {
        let s = spec((1, 1), (1, 1), ParitySchedule::Logstar);
        let prefix = build_regularity_prefix(&s, 100).unwrap();
        let raw = sample_sequence(&BiasSequence::constant_ratio(1, 2).unwrap(), 100, 11);
        assert_eq!(prefix.bits, raw);
        assert!(prefix.ledger.iter().all(|r| r.k == 0));
    }

    #[test]
    fn half_density_doubles_blocks() {
        let s = spec((1, 2), (1, 2), ParitySchedule::Logstar);
        let ledger = regularity_ledger(&s, 50).unwrap();
        for r in &ledger {
            assert_eq!(r.k, r.r_len);
            assert_eq!(r.end, 2 * r.n * r.n);
        }
        let prefix = build_regularity_prefix(&s, 2 * 50 * 50).unwrap();
        let mut pos = 0;
        for r in &prefix.ledger {
            pos += r.r_len as usize;
            assert!(prefix.bits[pos..pos + r.k as usize].iter().all(|&b| b == 0));
            pos += r.k as usize;
        }
    }

    #[test]
    fn padding_follows_parity() {
        let s = spec((1, 2), (1, 1), ParitySchedule::Logstar);
        let ledger = regularity_ledger(&s, 100).unwrap();
        for r in &ledger {
            // log* n by hand: 1 -> 0, 2 -> 1, 3..4 -> 2, 5..16 -> 3, 17..65536 -> 4
            let hand = match r.n {
                1 => 0,
                2 => 1,
                3..=4 => 2,
                5..=16 => 3,
                _ => 4,
            };
            assert_eq!(r.driver, hand);
            let expected = if hand % 2 == 1 { r.r_len } else { 0 };
            assert_eq!(r.k, expected, "n={}", r.n);
        }
    }

    #[test]
    fn sandwich_examples() {
        for (a, b) in [((1, 1), (1, 1)), ((1, 2), (1, 2)), ((1, 3), (4, 5))] {
            let s = spec(a, b, ParitySchedule::Logstar);
            let r = sandwich_check(&s, &regularity_ledger(&s, 300).unwrap());
            assert!(r.passed && r.structure_ok, "{r:?}");
            assert!(r.lower_margin >= 0.0 && r.upper_margin >= 0.0);
        }
        let s = spec((1, 2), (1, 2), ParitySchedule::Logstar);
        let mut ledger = regularity_ledger(&s, 10).unwrap();
        ledger[4].end += 1000;
        let r = sandwich_check(&s, &ledger);
        assert!(!r.passed);
        assert_eq!(r.first_failure, Some(5));
    }

    #[test]
    fn bad_specs() {
        assert!(regularity_ledger(&spec((0, 1), (1, 2), ParitySchedule::Logstar), 5).is_err());
        assert!(regularity_ledger(&spec((3, 4), (1, 2), ParitySchedule::Logstar), 5).is_err());
        let json = r#"{"alpha": "1/2", "beta": "1", "seed": 3, "schedule": "fast"}"#;
        let parsed: RegularitySpec = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.schedule, ParitySchedule::Fast);
        assert_eq!(parsed.alpha, Rat::new(1, 2));
    }

    #[test]
    fn kraft_roots() {
        assert_eq!(selfsimilar_dimension(&system(&["0", "1"])), 1.0);
        let s = selfsimilar_dimension(&system(&["00", "01", "10"]));
        assert!((s - 3f64.log2() / 2.0).abs() < 1e-8);
        assert!((s - 0.792_481_3).abs() < 1e-6);
        let s = selfsimilar_dimension(&system(&["0", "10"]));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s - golden.log2()).abs() < 1e-8);
        assert!((s - 0.694_241_9).abs() < 1e-6);
        assert_eq!(selfsimilar_dimension(&system(&["0110"])), 0.0);
        assert!(SelfSimilarSystem::new(vec![]).is_err());
        assert!(SelfSimilarSystem::new(vec![vec![0], vec![0, 1]]).is_err());
    }

    #[test]
    fn composite_detection() {
        let a = system(&["0", "10"]);
        for w in ["", "0", "10", "010", "1010", "000"] {
            assert!(a.is_composite(&parse_bits(w).unwrap()), "{w}");
        }
        for w in ["1", "01", "11", "0101"] {
            assert!(!a.is_composite(&parse_bits(w).unwrap()), "{w}");
        }
    }

    #[test]
    fn supergale_on_full_system() {
        let a = system(&["0", "1"]);
        let d = selfsimilar_supergale(&a, 1.0, 0.5).unwrap();
        for w in strings_of_length(5) {
            assert_eq!(d.exact_capital(&w).unwrap(), Some(Surd::pow2_halves(5)));
        }
        assert!(validate(&d, 8).unwrap().passed);
    }

    #[test]
    fn supergale_succeeds_strongly_on_members() {
        let a = system(&["0", "10"]);
        let s = selfsimilar_dimension(&a);
        let d = selfsimilar_supergale(&a, s, 0.1).unwrap();
        let w: Vec<Bit> = [1, 0].iter().copied().cycle().take(200).collect();
        let t = evaluate(&d, &w).unwrap();
        for n in (0..=200).step_by(2) {
            assert!((t.log_capitals[n] - 0.1 * n as f64).abs() < 1e-9);
        }
        let r = validate(&d, 8).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(selfsimilar_supergale(&a, 0.5, 0.1).is_err());
    }

    #[test]
    fn supergale_is_exact_at_composites() {
        let a = system(&["00", "01", "10"]);
        let s = selfsimilar_dimension(&a);
        let d = selfsimilar_supergale(&a, s, 0.25).unwrap();
        for len in 0..=12 {
            for w in strings_of_length(len) {
                if a.is_composite(&w) {
                    assert!((d.log_capital(&w).unwrap() - 0.25 * len as f64).abs() < 1e-12);
                }
            }
        }
        let exact = selfsimilar_supergale(&system(&["0", "11"]), 1.0, 0.5).unwrap();
        let r = validate(&exact, 10).unwrap();
        assert_eq!(r.mode, crate::gale::ValidationMode::Exact);
        assert!(r.passed);
    }

    /// Length-`n` prefixes of concatenations, by explicit enumeration.
    fn brute_force_count(a: &SelfSimilarSystem, n: usize) -> usize {
        let mut frontier: Vec<Vec<Bit>> = vec![vec![]];
        let mut found = BTreeSet::new();
        while let Some(w) = frontier.pop() {
            if w.len() >= n {
                found.insert(w[..n].to_vec());
                continue;
            }
            for u in a.strings() {
                let mut next = w.clone();
                next.extend_from_slice(u);
                frontier.push(next);
            }
        }
        found.len()
    }

    #[test]
    fn box_count_matches_enumeration() {
        let a = system(&["0", "1"]);
        for n in 0..10 {
            assert_eq!(box_count(&a, n), BigUint::one() << n);
        }
        let systems = [
            system(&["0", "10"]),
            system(&["00", "01", "10"]),
            system(&["011"]),
            system(&["0", "11"]),
            system(&["1", "01", "000"]),
            system(&["0110", "10", "111"]),
        ];
        for a in &systems {
            let counts = box_counts(a, 12);
            for n in 0..=12 {
                assert_eq!(
                    counts[n],
                    BigUint::from(brute_force_count(a, n)),
                    "{a:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn box_count_rates() {
        for items in [&["00", "01", "10"][..], &["0", "10"][..]] {
            let a = system(items);
            let s = selfsimilar_dimension(&a);
            let counts = box_counts(&a, 200);
            assert!((log2_biguint(&counts[200]) / 200.0 - s).abs() <= 0.02);
            assert!((entropy_rate(&counts, (100, 200)).unwrap() - s).abs() <= 0.02);
        }
    }

    #[test]
    fn entropy_rate_examples() {
        let all: Vec<BigUint> = (0..50).map(|n| BigUint::one() << n).collect();
        assert_eq!(entropy_rate(&all, (1, 49)).unwrap(), 1.0);
        let ones = vec![BigUint::one(); 50];
        assert_eq!(entropy_rate(&ones, (0, 49)).unwrap(), 0.0);
        let mut sparse = ones.clone();
        sparse[10] = BigUint::zero();
        assert_eq!(entropy_rate(&sparse, (10, 10)).unwrap(), f64::NEG_INFINITY);
        assert!(entropy_rate(&ones, (0, 50)).is_err());
    }

    #[test]
    fn big_logs() {
        let x = BigUint::one() << 300u32;
        assert_eq!(log2_biguint(&x), 300.0);
        assert_eq!(log2_count(&BigUint::from(8u32)), 3.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generated_ledgers_pass(a in 1i64..=8, extra in 0i64..=8, blocks in 1u64..400, fast in any::<bool>()) {
            let b = (a + extra).min(8);
            let schedule = if fast { ParitySchedule::Fast } else { ParitySchedule::Logstar };
            let s = spec((a, 8), (b, 8), schedule);
            let ledger = regularity_ledger(&s, blocks).unwrap();
            let r = sandwich_check(&s, &ledger);
            prop_assert!(r.passed && r.structure_ok);
        }

        #[test]
        fn round_robin_stays_in_the_set(len in 1usize..200) {
            let a = system(&["0", "10", "110"]);
            let w = a.round_robin(len);
            prop_assert_eq!(w.len(), len);
            let counts = box_counts(&a, len);
            prop_assert!(!counts[len].is_zero());
            let d = selfsimilar_supergale(&a, selfsimilar_dimension(&a), 0.1).unwrap();
            prop_assert!(d.log_capital(&w).unwrap() > f64::NEG_INFINITY);
        }
    }
}
