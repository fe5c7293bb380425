//! Estimators and hypothesis tests.

pub mod ecf;
pub mod ks;
pub mod moments;
pub mod rotation;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

pub use ecf::{
    cf_radiality_residual, empirical_cf, fit_log_cf_quadratic, functional_equation_residual, EmpiricalCF,
    LogCfFit,
};
pub use ks::{ks_statistic, ks_two_sample, ks_two_sample_values};
pub use moments::{marginal_moment_checks, MomentSummary, PairValue};
pub use rotation::{rotation_invariance_test, DEFAULT_K_ROTATIONS};

/// Outcome of a two-sample test. `reject` is always `p_value < alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub m_a: usize,
    pub m_b: usize,
}

impl TestResult {
    pub fn new(statistic: f64, p_value: f64, alpha: f64, m_a: usize, m_b: usize) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self { statistic, p_value, alpha, reject: p_value < alpha, m_a, m_b }
    }
}

/// Two-sided `level` band for the empirical rejection rate of a level-`alpha`
/// test over `trials` independent replications, as rates in `[0, 1]`.
pub fn binomial_band(alpha: f64, trials: usize, level: f64) -> (f64, f64) {
    let dist = Binomial::new(alpha, trials as u64).expect("valid binomial parameters");
    let tail = (1.0 - level) / 2.0;
    let lo = dist.inverse_cdf(tail) as f64;
    let hi = dist.inverse_cdf(1.0 - tail) as f64;
    (lo / trials as f64, hi / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reject_iff_p_below_alpha() {
        assert!(TestResult::new(0.5, 0.01, 0.05, 10, 10).reject);
        assert!(!TestResult::new(0.5, 0.05, 0.05, 10, 10).reject);
        assert_eq!(TestResult::new(0.5, 1.2, 0.05, 10, 10).p_value, 1.0);
    }

    #[test]
    fn binomial_band_brackets_alpha() {
        let (lo, hi) = binomial_band(0.05, 200, 0.99);
        assert!(lo > 0.0 && lo < 0.05 && hi > 0.05 && hi <= 0.10, "({lo}, {hi})");
        let (lo, hi) = binomial_band(0.5, 100, 0.99);
        assert!(lo < 0.5 && hi > 0.5);
    }
}
