use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::VectorSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Column means, plus Pearson correlation and covariance of squares for
/// every column pair `i < j` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub means: Vec<f64>,
    pub pair_correlations: Vec<PairValue>,
    pub pair_cov_squares: Vec<PairValue>,
}

fn cov(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len() as f64;
    let ma = a.iter().sum::<f64>() / m;
    let mb = b.iter().sum::<f64>() / m;
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / m
}

/// Correlations of a column with zero variance are reported as 0.
pub fn marginal_moment_checks(vs: &VectorSample) -> Result<MomentSummary> {
    if vs.m() < 2 {
        return Err(Error::SampleTooSmall { needed: 2, got: vs.m() });
    }
    let n = vs.n();
    let m = vs.m() as f64;
    let cols: Vec<Vec<f64>> = (0..n).map(|j| vs.rows().map(|r| r[j]).collect()).collect();
    let squares: Vec<Vec<f64>> = cols.iter().map(|c| c.iter().map(|x| x * x).collect()).collect();
    let means = cols.iter().map(|c| c.iter().sum::<f64>() / m).collect();
    let vars: Vec<f64> = cols.iter().map(|c| cov(c, c)).collect();

    let mut pair_correlations = Vec::new();
    let mut pair_cov_squares = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let denom = (vars[i] * vars[j]).sqrt();
            let corr = if denom > 0.0 { cov(&cols[i], &cols[j]) / denom } else { 0.0 };
            pair_correlations.push(PairValue { i, j, value: corr });
            pair_cov_squares.push(PairValue { i, j, value: cov(&squares[i], &squares[j]) });
        }
    }
    Ok(MomentSummary { means, pair_correlations, pair_cov_squares })
}
