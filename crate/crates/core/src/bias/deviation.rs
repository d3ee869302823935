use rayon::prelude::*;
use serde::Serialize;

use super::{entropy_sum, BiasSequence, BitSource};
use crate::bias::trial_seed;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`deviation_tail_exact`].
pub const MAX_DP_LENGTH: usize = 4096;
/// Self-information increments are rounded to multiples of `2^-DP_GRID_BITS` bits.
pub const DP_GRID_BITS: i32 = 20;
const MAX_BINS: usize = 1 << 22;

/// Exact tail `P[|L_n - n H_n| >= eps n]` up to the value-grid rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactTail {
    pub n: usize,
    pub eps: f64,
    /// Tail of the rounded distribution.
    pub probability: f64,
    /// Tail with the threshold raised by `grid_error` (a certain lower bound).
    pub lower: f64,
    /// Tail with the threshold lowered by `grid_error` (a certain upper bound).
    pub upper: f64,
    /// Accumulated rounding budget `n * 2^-20` bits.
    pub grid_error: f64,
    pub bins: usize,
}

/// Distribution of `L_n` by dynamic programming over two-valued increments.
pub fn deviation_tail_exact(beta: &BiasSequence, n: usize, eps: f64) -> Result<ExactTail> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if n > MAX_DP_LENGTH {
        return Err(Error::Resource(format!(
            "exact tail limited to n <= {MAX_DP_LENGTH}, got {n}"
        )));
    }
    let scale = f64::from(DP_GRID_BITS).exp2();
    // sorted (bin, probability) pairs
    let mut dist: Vec<(i64, f64)> = vec![(0, 1.0)];
    let mut next: Vec<(i64, f64)> = Vec::new();
    for i in 0..n as u64 {
        let b = beta.beta(i);
        let step0 = (beta.xi(i, 0) * scale).round() as i64;
        let step1 = (beta.xi(i, 1) * scale).round() as i64;
        next.clear();
        let zeros = dist.iter().map(|&(v, p)| (v + step0, p * (1.0 - b)));
        let ones = dist.iter().map(|&(v, p)| (v + step1, p * b));
        merge_into(&mut next, zeros, ones);
        if next.len() > MAX_BINS {
            return Err(Error::Resource(format!(
                "value grid grew past {MAX_BINS} bins at step {i}"
            )));
        }
        std::mem::swap(&mut dist, &mut next);
    }

    let center = entropy_sum(beta, n);
    let threshold = eps * n as f64;
    let grid_error = n as f64 / scale;
    let tail_at = |t: f64| -> f64 {
        dist.iter()
            .filter(|&&(v, _)| (v as f64 / scale - center).abs() >= t)
            .fold(0.0, |acc, &(_, p)| acc + p)
    };
    Ok(ExactTail {
        n,
        eps,
        probability: tail_at(threshold),
        lower: tail_at(threshold + grid_error),
        upper: tail_at(threshold - grid_error).min(1.0),
        grid_error,
        bins: dist.len(),
    })
}

fn merge_into(
    out: &mut Vec<(i64, f64)>,
    a: impl Iterator<Item = (i64, f64)>,
    b: impl Iterator<Item = (i64, f64)>,
) {
    let mut a = a.peekable();
    let mut b = b.peekable();
    loop {
        let item = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => {
                if x.0 <= y.0 {
                    a.next()
                } else {
                    b.next()
                }
            }
            (Some(_), None) => a.next(),
            (None, Some(_)) => b.next(),
            (None, None) => break,
        };
        let (v, p) = item.expect("peeked");
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => out.push((v, p)),
        }
    }
}

/// Monte-Carlo estimate of the same tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McTail {
    pub n: usize,
    pub eps: f64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / trials)`.
    pub stderr: f64,
}

/// Trial `t` draws its bits from `BitSource::new(trial_seed(seed, t))`, so the
/// result does not depend on how trials are scheduled across threads.
pub fn deviation_tail_mc(
    beta: &BiasSequence,
    n: usize,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<McTail> {
    if trials == 0 {
        return Err(Error::Domain(
            "Monte-Carlo tail needs at least one trial".into(),
        ));
    }
    let probs: Vec<f64> = (0..n as u64).map(|i| beta.beta(i)).collect();
    let xi: Vec<(f64, f64)> = (0..n as u64)
        .map(|i| (beta.xi(i, 0), beta.xi(i, 1)))
        .collect();
    let center = entropy_sum(beta, n);
    let threshold = eps * n as f64;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut source = BitSource::new(trial_seed(seed, t));
            let l: f64 = probs
                .iter()
                .zip(&xi)
                .map(|(&p, &(x0, x1))| if source.bernoulli(p) == 1 { x1 } else { x0 })
                .sum();
            (l - center).abs() >= threshold
        })
        .count() as u64;
    let estimate = hits as f64 / trials as f64;
    Ok(McTail {
        n,
        eps,
        trials,
        hits,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}
