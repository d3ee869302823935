//! Base-2 log-domain helpers.

/// `log2(sum 2^t)` over the terms; `-inf` when every term is `-inf`.
pub fn log2_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp2()).sum::<f64>().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_in_log_domain() {
        assert!((log2_sum([0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((log2_sum([3.0, 1.0]) - 10f64.log2()).abs() < 1e-14);
        assert_eq!(log2_sum([f64::NEG_INFINITY, 2.0]), 2.0);
        assert_eq!(log2_sum([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert_eq!(log2_sum(Vec::<f64>::new()), f64::NEG_INFINITY);
    }
}
