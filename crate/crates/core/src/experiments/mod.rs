//! One seeded, self-verifying experiment per statement.
//!
//! Every experiment derives its randomness from
//! `RandomSource::new(cfg.seed).split_named(name)`, then splits per arm and
//! per replication, so results do not depend on execution order or thread
//! scheduling. Replications run in parallel with rayon.

mod characterization;
mod report;
mod symmetry;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::stats::TestResult;

pub use characterization::{
    exp_dependent_spherical, exp_functional_equation, exp_main_slln_ratio, exp_partial_sum_identity,
    ratio_statistic, CF_DRAWS, COV_DRAWS, PARTIAL_SUM_DIMS, SLLN_DIM,
};
pub use report::{Bound, Criterion, ExperimentReport, Series, Verdict};
pub use symmetry::{
    exp_cf_radiality, exp_extension_2_to_n, exp_identical_components, exp_uniform_sphere, exp_zero_atom_dichotomy,
    identical_components_report, Input, IDENTICAL_DIM,
};

pub type ExperimentFn = fn(&ExperimentConfig) -> Result<ExperimentReport>;

pub struct ExperimentDef {
    pub name: &'static str,
    pub summary: &'static str,
    pub run: ExperimentFn,
}

pub const REGISTRY: &[ExperimentDef] = &[
    ExperimentDef {
        name: "exp_identical_components",
        summary: "entries of a spherical vector share one law; mean 0, uncorrelated",
        run: exp_identical_components,
    },
    ExperimentDef {
        name: "exp_cf_radiality",
        summary: "spherical iff the joint CF is phi_1(|t|)",
        run: exp_cf_radiality,
    },
    ExperimentDef {
        name: "exp_extension_2_to_n",
        summary: "i.i.d. coordinates spherical in 2-D stay spherical in every dimension",
        run: exp_extension_2_to_n,
    },
    ExperimentDef {
        name: "exp_zero_atom_dichotomy",
        summary: "independent spherical pair has P(X=0) in {0, 1}",
        run: exp_zero_atom_dichotomy,
    },
    ExperimentDef {
        name: "exp_uniform_sphere",
        summary: "normalized spherical vectors are uniform on the sphere",
        run: exp_uniform_sphere,
    },
    ExperimentDef {
        name: "exp_main_slln_ratio",
        summary: "sqrt(n) X_1/|X_n| matches its Gaussian analogue; |X_n|/sqrt(n) -> sqrt(E X^2)",
        run: exp_main_slln_ratio,
    },
    ExperimentDef {
        name: "exp_partial_sum_identity",
        summary: "S_n/sqrt(n) has the law of X_1 (averaging-row Householder); CLT pull for non-normal laws",
        run: exp_partial_sum_identity,
    },
    ExperimentDef {
        name: "exp_dependent_spherical",
        summary: "scale mixture: spherical for all n but Cov(X_i^2, X_j^2) > 0 and not normal",
        run: exp_dependent_spherical,
    },
    ExperimentDef {
        name: "exp_functional_equation",
        summary: "phi(s) phi(t) = phi(sqrt(s^2+t^2)) and log phi(t) = c t^2/2 with c = -sigma^2",
        run: exp_functional_equation,
    },
];

pub fn find(name: &str) -> Option<&'static ExperimentDef> {
    REGISTRY.iter().find(|d| d.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.name).collect()
}

fn run_def(def: &ExperimentDef, cfg: &ExperimentConfig) -> ExperimentReport {
    let outcome = cfg.validate().and_then(|_| (def.run)(cfg));
    outcome.unwrap_or_else(|e| ExperimentReport::errored(def.name, cfg, e.to_string()))
}

/// Runs the named experiments in the given order. Unknown names are rejected
/// before anything runs; a failing experiment yields an errored report and
/// does not stop its siblings.
pub fn run_named(names: &[&str], cfg: &ExperimentConfig) -> Result<Vec<ExperimentReport>> {
    let defs = names
        .iter()
        .map(|n| find(n).ok_or_else(|| Error::UnknownExperiment(n.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(defs.into_iter().map(|d| run_def(d, cfg)).collect())
}

pub fn run_all(cfg: &ExperimentConfig) -> Vec<ExperimentReport> {
    REGISTRY.iter().map(|d| run_def(d, cfg)).collect()
}

// ---- shared helpers ----

pub(crate) fn experiment_root(cfg: &ExperimentConfig, name: &str) -> RandomSource {
    RandomSource::new(cfg.seed).split_named(name)
}

/// Runs `f` for replications `0..reps`, each with its own child stream.
pub(crate) fn replicate<T, F>(root: &RandomSource, reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &RandomSource) -> Result<T> + Sync,
{
    (0..reps).into_par_iter().map(|r| f(r, &root.split(r as u64))).collect()
}

pub(crate) fn rate(flags: impl IntoIterator<Item = bool>) -> f64 {
    let (mut hits, mut total) = (0usize, 0usize);
    for f in flags {
        hits += usize::from(f);
        total += 1;
    }
    hits as f64 / total.max(1) as f64
}

/// Bonferroni combination: largest statistic, `min(1, k min p)`.
pub(crate) fn bonferroni(results: &[TestResult], alpha: f64) -> TestResult {
    let k = results.len() as f64;
    let stat = results.iter().map(|r| r.statistic).fold(0.0, f64::max);
    let min_p = results.iter().map(|r| r.p_value).fold(1.0, f64::min);
    let (m_a, m_b) = results.first().map(|r| (r.m_a, r.m_b)).unwrap_or((0, 0));
    TestResult::new(stat, (k * min_p).min(1.0), alpha, m_a, m_b)
}

/// Density histogram over `[lo, hi]` as (bin centre, density).
pub(crate) fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Series {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v < hi {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let total = values.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (lo + width * (i as f64 + 0.5), c as f64 / (total * width)))
        .collect()
}

/// Normal QQ points: (standard normal quantile, sample quantile).
pub(crate) fn normal_qq(values: &[f64], points: usize) -> Series {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    (0..points)
        .map(|k| {
            let p = (k as f64 + 0.5) / points as f64;
            let idx = ((p * n as f64) as usize).min(n - 1);
            (normal.inverse_cdf(p), sorted[idx])
        })
        .collect()
}
