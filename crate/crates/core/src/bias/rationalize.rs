//! Replacing a computable bias sequence by an exactly computable one that is
//! square-summably close to it.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::{BiasFn, BiasSequence};
use crate::error::{Error, Result};
use crate::rational::{pow2, to_f64};

/// Rational approximations `g(i, r)` with `|g(i, r) - beta_i| <= 2^-r`.
pub trait Approximator: Send + Sync + fmt::Debug {
    fn approximate(&self, i: u64, precision: u32) -> BigRational;
}

/// An exactly computable sequence approximates itself with zero error.
impl Approximator for BiasSequence {
    fn approximate(&self, i: u64, _precision: u32) -> BigRational {
        self.beta_exact(i)
            .expect("exact approximator requires a rational bias sequence")
    }
}

#[derive(Debug)]
struct Shifted {
    source: Arc<dyn Approximator>,
    m: u32,
    delta: f64,
}

impl Shifted {
    fn value(&self, i: u64) -> BigRational {
        let r = self.m + i as u32;
        self.source.approximate(i, r) - pow2(-i64::from(r))
    }
}

impl BiasFn for Shifted {
    fn beta(&self, i: u64) -> f64 {
        to_f64(&self.value(i))
    }

    fn beta_exact(&self, i: u64) -> Option<BigRational> {
        Some(self.value(i))
    }

    fn bounds(&self) -> (f64, f64) {
        (self.delta / 2.0, 1.0 - self.delta)
    }

    fn tag(&self) -> String {
        format!("rationalized(m={})", self.m)
    }
}

/// `beta'_i = g(i, m + i) - 2^-(m+i)` with `m = 2 + ceil(log2(1/delta))`.
#[derive(Clone, Debug)]
pub struct Rationalized {
    pub m: u32,
    pub delta: f64,
    pub sequence: BiasSequence,
}

pub fn rationalize(source: Arc<dyn Approximator>, delta: f64) -> Result<Rationalized> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1/2], got {delta}"
        )));
    }
    let m = 2 + (1.0 / delta).log2().ceil() as u32;
    let sequence = BiasSequence::custom(Arc::new(Shifted { source, m, delta }))?;
    Ok(Rationalized { m, delta, sequence })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalizationReport {
    pub terms: usize,
    /// `sum_{i<K} (beta_i - beta'_i)^2`.
    pub square_sum: f64,
    /// `sum_{i<K} 4^-(m+i)+1`.
    pub bound: f64,
    /// Every `beta'_i` lies in `[delta/2, beta_i]`.
    pub within_interval: bool,
}

impl Rationalized {
    pub fn beta(&self, i: u64) -> BigRational {
        self.sequence
            .beta_exact(i)
            .expect("rationalized values are exact")
    }

    /// Square-sum diagnostic against the exact original values.
    pub fn report(&self, original: &BiasSequence, terms: usize) -> RationalizationReport {
        let half_delta = BigRational::new(1.into(), 2.into())
            * BigRational::from_float(self.delta).expect("finite delta");
        let mut square_sum = 0.0;
        let mut bound = 0.0;
        let mut within_interval = true;
        for i in 0..terms as u64 {
            let shifted = self.beta(i);
            let diff = match original.beta_exact(i) {
                Some(b) => {
                    within_interval &= shifted >= half_delta && shifted <= b;
                    to_f64(&(b - &shifted))
                }
                None => original.beta(i) - to_f64(&shifted),
            };
            square_sum += diff * diff;
            bound += (-2.0 * f64::from(self.m + i as u32) + 2.0).exp2();
        }
        RationalizationReport {
            terms,
            square_sum,
            bound,
            within_interval,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_approximator_shifts_by_powers_of_two() {
        let beta = BiasSequence::periodic(vec![q(1, 2), q(3, 5)]).unwrap();
        let r = rationalize(Arc::new(beta.clone()), 0.5).unwrap();
        assert_eq!(r.m, 3);
        for i in 0..10u64 {
            assert_eq!(
                r.beta(i),
                beta.beta_exact(i).unwrap() - pow2(-(3 + i as i64))
            );
        }
    }

    #[test]
    fn quarter_example() {
        let beta = BiasSequence::constant_ratio(1, 4).unwrap();
        let r = rationalize(Arc::new(beta.clone()), 0.25).unwrap();
        assert_eq!(r.m, 4);
        assert_eq!(r.beta(0), q(3, 16));
        let report = r.report(&beta, 30);
        assert!(report.within_interval);
        // with an exact g each term is exactly 4^-(m+i)
        let tight: f64 = (0..30).map(|i| (-2.0 * (4 + i) as f64).exp2()).sum();
        assert!(report.square_sum <= tight * (1.0 + 1e-12));
        assert!(report.square_sum <= report.bound);
    }

    #[derive(Debug)]
    struct Truncating;

    impl Approximator for Truncating {
        // 1/3 truncated to r binary digits
        fn approximate(&self, _i: u64, r: u32) -> BigRational {
            let scale = pow2(i64::from(r));
            let digits = (scale.clone() / BigRational::from_integer(3.into())).floor();
            digits / scale
        }
    }

    #[test]
    fn inexact_approximator_respects_the_bound() {
        let r = rationalize(Arc::new(Truncating), 1.0 / 3.0).unwrap();
        assert_eq!(r.m, 4);
        let third = BiasSequence::constant_ratio(1, 3).unwrap();
        let report = r.report(&third, 40);
        assert!(report.within_interval);
        assert!(report.square_sum <= report.bound);
    }
}
