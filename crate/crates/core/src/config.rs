//! Experiment configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evenly spaced evaluation grid `steps` points from `t_min` to `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl CfGrid {
    pub fn points(&self) -> Vec<f64> {
        let h = (self.t_max - self.t_min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = self.t_min + h * i as f64;
                // Snap the centre of symmetric grids to an exact zero.
                if t.abs() < 1e-12 * h {
                    0.0
                } else {
                    t
                }
            })
            .collect()
    }
}

impl Default for CfGrid {
    fn default() -> Self {
        Self { t_min: -3.0, t_max: 3.0, steps: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Draws per test.
    pub m: usize,
    pub n_list: Vec<usize>,
    pub alpha: f64,
    pub replications: usize,
    pub cf_grid: CfGrid,
    pub tolerances: BTreeMap<String, f64>,
}

/// Named thresholds used by the experiments' pass criteria.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        // Empirical CF residuals.
        ("cf_residual_max", 0.03),
        ("cf_residual_control_min", 0.05),
        ("fe_residual_max", 0.03),
        ("fe_residual_control_min", 0.04),
        // Relative half-width of the band around c = -sigma^2.
        ("log_cf_c_rel", 0.05),
        ("log_cf_control_residual_min", 0.1),
        // Rejection-rate thresholds over replications.
        ("power_min", 0.99),
        ("clt_accept_min", 0.90),
        // SLLN surrogate.
        ("slln_rel_err", 0.01),
        ("slln_seed_fraction", 0.99),
        // Covariance of squares.
        ("cov_sq_mixture_lo", 2.10),
        ("cov_sq_mixture_hi", 2.40),
        ("cov_sq_gauss_abs", 0.1),
        // Moment bands in standard errors.
        ("moment_z", 5.0),
        ("sphere_norm_tol", 1e-12),
        ("orthogonality_tol", 1e-10),
        ("partial_sum_identity_tol", 1e-12),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            m: 20_000,
            n_list: vec![2, 4, 16, 64],
            alpha: 0.05,
            replications: 100,
            cf_grid: CfGrid::default(),
            tolerances: default_tolerances(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha {} not in (0,1)", self.alpha)));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig(format!("m = {} < 2", self.m)));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::InvalidConfig("dimensions must be >= 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        let g = &self.cf_grid;
        if g.steps < 2 || !(g.t_min < g.t_max) || !g.t_min.is_finite() || !g.t_max.is_finite() {
            return Err(Error::InvalidConfig(format!("bad cf grid {g:?}")));
        }
        if self.tolerances.values().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite tolerance".into()));
        }
        Ok(())
    }

    /// Named tolerance, falling back to the built-in default.
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| default_tolerances().get(name).copied())
            .unwrap_or_else(|| panic!("unknown tolerance `{name}`"))
    }

    pub fn max_n(&self) -> usize {
        self.n_list.iter().copied().max().unwrap_or(1)
    }
}
