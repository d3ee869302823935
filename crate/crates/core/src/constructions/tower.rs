//! Towers `t_0 = 1, t_{j+1} = 2^{t_j}` and the iterated logarithm they induce.

use num_bigint::BigUint;
use num_traits::One;

/// Highest tower index that is materialized; `t_5 = 2^65536` already has
/// 65537 bits and `t_6` cannot be stored.
pub const MAX_MATERIALIZED: usize = 5;

#[derive(Clone, Debug)]
pub struct TowerSchedule {
    towers: Vec<BigUint>,
}

impl Default for TowerSchedule {
    fn default() -> Self {
        Self::new()
    }
}

impl TowerSchedule {
    pub fn new() -> Self {
        let mut towers = vec![BigUint::one()];
        for j in 0..MAX_MATERIALIZED {
            let exponent = u32::try_from(&towers[j]).expect("tower exponent fits in u32");
            towers.push(BigUint::one() << exponent);
        }
        TowerSchedule { towers }
    }

    /// `t_j` for `j <= 5`.
    pub fn tower(&self, j: usize) -> Option<&BigUint> {
        self.towers.get(j)
    }

    pub fn log_star(&self, n: &BigUint) -> usize {
        self.towers
            .iter()
            .position(|t| t >= n)
            .unwrap_or(MAX_MATERIALIZED + 1)
    }
}

/// `log* n = min { j : t_j >= n }`.
pub fn log_star(n: u128) -> u32 {
    let mut t: u128 = 1;
    let mut j = 0;
    while t < n {
        // t_4 = 65536, t_5 = 2^65536 exceeds every u128
        if t >= 128 {
            return j + 1;
        }
        t = 1u128 << t;
        j += 1;
    }
    j
}

/// `floor(log2(log2 n))`, i.e. the largest `k` with `2^(2^k) <= n`; 0 for `n <= 3`.
pub fn log_log(n: u128) -> u32 {
    let mut k = 0;
    while k < 7 && (1u32 << (k + 1)) < 128 && n >= (1u128 << (1u32 << (k + 1))) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers_and_log_star() {
        let sched = TowerSchedule::new();
        let expected: [u64; 5] = [1, 2, 4, 16, 65536];
        for (j, &t) in expected.iter().enumerate() {
            assert_eq!(sched.tower(j).unwrap(), &BigUint::from(t));
            assert_eq!(log_star(t as u128), j as u32);
            assert_eq!(sched.log_star(&BigUint::from(t)), j);
        }
        assert_eq!(sched.tower(5).unwrap().bits(), 65537);
        assert_eq!(sched.log_star(sched.tower(5).unwrap()), 5);
        assert_eq!(log_star(3), 2);
        assert_eq!(log_star(17), 4);
        assert_eq!(log_star(65537), 5);
        assert_eq!(log_star(u128::MAX), 5);
        assert_eq!(log_star(0), 0);
    }

    #[test]
    fn log_star_is_monotone() {
        let mut prev = 0;
        for n in 0..100_000u128 {
            let j = log_star(n);
            assert!(j >= prev);
            prev = j;
        }
    }

    #[test]
    fn log_log_thresholds() {
        assert_eq!(log_log(1), 0);
        assert_eq!(log_log(3), 0);
        assert_eq!(log_log(4), 1);
        assert_eq!(log_log(15), 1);
        assert_eq!(log_log(16), 2);
        assert_eq!(log_log(255), 2);
        assert_eq!(log_log(256), 3);
        assert_eq!(log_log(65535), 3);
        assert_eq!(log_log(65536), 4);
        assert_eq!(log_log(u128::MAX), 6);
    }
}
