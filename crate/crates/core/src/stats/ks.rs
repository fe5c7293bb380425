//! Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov p-value.

use crate::error::{Error, Result};
use crate::sample::ScalarSample;
use crate::stats::TestResult;

/// `sup_x |F_a(x) - F_b(x)|` for sorted inputs. Ties are resolved by
/// stepping both ECDFs past every copy of the current pooled value before
/// comparing, which gives the exact supremum of the two step functions.
pub fn ks_statistic_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    ks_statistic_sorted(&a, &b)
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
///
/// Uses `2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)` (100 terms) for larger
/// `lambda`, and the Jacobi theta form of the CDF below 1.18, where the
/// alternating series converges too slowly.
pub fn kolmogorov_p_value(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let x = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=20)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (odd * odd * x).exp()
            })
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            / lambda;
        1.0 - cdf
    } else {
        let mut sum = 0.0;
        for k in 1..=100 {
            let k = k as f64;
            let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * (-2.0 * k * k * lambda * lambda).exp();
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

/// Two-sample test on raw slices. Inputs need not be sorted.
pub fn ks_two_sample_values(a: &[f64], b: &[f64], alpha: f64) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let d = ks_statistic(a, b);
    Ok(result_from_statistic(d, a.len(), b.len(), alpha))
}

pub fn ks_two_sample(a: &ScalarSample, b: &ScalarSample, alpha: f64) -> Result<TestResult> {
    ks_two_sample_values(a.values(), b.values(), alpha)
}

pub(crate) fn result_from_statistic(d: f64, m_a: usize, m_b: usize, alpha: f64) -> TestResult {
    let effective = (m_a as f64 * m_b as f64) / (m_a + m_b) as f64;
    TestResult::new(d, kolmogorov_p_value(effective.sqrt() * d), alpha, m_a, m_b)
}

/// One-sample statistic `sup |F_n - F|` against a continuous CDF.
pub fn ks_one_sample(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut x = values.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
