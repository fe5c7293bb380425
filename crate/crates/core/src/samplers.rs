//! Generators for the distribution families used by the experiments.
//!
//! Scalar families are parameterized by their standard deviation `sigma`, so
//! at the default `sigma = 1` every family has unit variance and comparisons
//! against `N(0, 1)` isolate shape rather than scale.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::sample::VectorSample;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    Gaussian { sigma: f64 },
    /// Laplace with scale `sigma / sqrt(2)`.
    Laplace { sigma: f64 },
    /// Uniform on `[-sqrt(3) sigma, sqrt(3) sigma]`; `[-1, 1]` up to scale.
    UniformPm1 { sigma: f64 },
    /// `+-sigma` with equal probability.
    Rademacher { sigma: f64 },
    PointMassZero,
    /// Zero with probability `p`, otherwise a draw from `base`.
    ZeroInflated { p: f64, base: Box<DistributionSpec> },
    /// Row-level scale: draw `sigma` once per row, then `N(0, sigma^2)` entries.
    ScaleMixtureGaussian { sigmas: Vec<f64>, weights: Vec<f64> },
    UniformSphere,
}

impl DistributionSpec {
    pub fn gaussian(sigma: f64) -> Self {
        Self::Gaussian { sigma }
    }

    pub fn laplace() -> Self {
        Self::Laplace { sigma: 1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Laplace { .. } => "laplace",
            Self::UniformPm1 { .. } => "uniform_pm1",
            Self::Rademacher { .. } => "rademacher",
            Self::PointMassZero => "point_mass_zero",
            Self::ZeroInflated { .. } => "zero_inflated",
            Self::ScaleMixtureGaussian { .. } => "scale_mixture_gaussian",
            Self::UniformSphere => "uniform_sphere",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match self {
            Self::Gaussian { sigma }
            | Self::Laplace { sigma }
            | Self::UniformPm1 { sigma }
            | Self::Rademacher { sigma } => {
                if !(sigma.is_finite() && *sigma >= 0.0) {
                    return bad(format!("sigma must be finite and >= 0, got {sigma}"));
                }
            }
            Self::ZeroInflated { p, base } => {
                if !(0.0..=1.0).contains(p) {
                    return bad(format!("p must lie in [0,1], got {p}"));
                }
                if !base.is_continuous_scalar() {
                    return bad(format!("zero-inflation base must be continuous, got {}", base.name()));
                }
                base.validate()?;
            }
            Self::ScaleMixtureGaussian { sigmas, weights } => validate_mixture(sigmas, weights)?,
            Self::PointMassZero | Self::UniformSphere => {}
        }
        Ok(())
    }

    fn is_continuous_scalar(&self) -> bool {
        matches!(self, Self::Gaussian { .. } | Self::Laplace { .. } | Self::UniformPm1 { .. })
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Self::ScaleMixtureGaussian { .. } | Self::UniformSphere)
    }

    /// Marginal variance `E X_1^2`.
    pub fn second_moment(&self) -> f64 {
        match self {
            Self::Gaussian { sigma }
            | Self::Laplace { sigma }
            | Self::UniformPm1 { sigma }
            | Self::Rademacher { sigma } => sigma * sigma,
            Self::PointMassZero => 0.0,
            Self::ZeroInflated { p, base } => (1.0 - p) * base.second_moment(),
            Self::ScaleMixtureGaussian { sigmas, weights } => {
                sigmas.iter().zip(weights).map(|(s, w)| w * s * s).sum()
            }
            // Set per call: E X_1^2 = 1/n on the sphere.
            Self::UniformSphere => f64::NAN,
        }
    }

    fn draw_scalar<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            Self::Laplace { sigma } => {
                let e: f64 = Exp1.sample(rng);
                let b = sigma / std::f64::consts::SQRT_2;
                if rng.random::<bool>() {
                    b * e
                } else {
                    -b * e
                }
            }
            Self::UniformPm1 { sigma } => SQRT_3 * sigma * rng.random_range(-1.0..1.0),
            Self::Rademacher { sigma } => {
                if rng.random::<bool>() {
                    *sigma
                } else {
                    -sigma
                }
            }
            Self::PointMassZero => 0.0,
            Self::ZeroInflated { p, base } => {
                if *p >= 1.0 || (*p > 0.0 && rng.random::<f64>() < *p) {
                    0.0
                } else {
                    base.draw_scalar(rng)
                }
            }
            Self::ScaleMixtureGaussian { .. } | Self::UniformSphere => {
                unreachable!("vector family drawn as scalar")
            }
        }
    }
}

fn validate_mixture(sigmas: &[f64], weights: &[f64]) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidDistribution(msg));
    if sigmas.is_empty() || sigmas.len() != weights.len() {
        return bad(format!("{} sigmas vs {} weights", sigmas.len(), weights.len()));
    }
    if sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return bad("mixture sigmas must be finite and >= 0".into());
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return bad("mixture weights must be finite and >= 0".into());
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return bad(format!("weights sum to {total}, not 1"));
    }
    Ok(())
}

/// `family[:key=value,...]`, e.g. `laplace:sigma=1`,
/// `zero_inflated:p=0.3,base=gaussian`,
/// `scale_mixture_gaussian:sigmas=1/2,weights=0.5/0.5`.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::BTreeMap::new();
        for kv in rest.split(',').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidDistribution(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |key: &str, default: f64| -> Result<f64> {
            match params.get(key) {
                None => Ok(default),
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::InvalidDistribution(format!("bad number for {key}: `{v}`"))),
            }
        };
        let list = |key: &str| -> Result<Vec<f64>> {
            params
                .get(key)
                .ok_or_else(|| Error::InvalidDistribution(format!("missing `{key}`")))?
                .split('/')
                .map(|v| {
                    v.parse()
                        .map_err(|_| Error::InvalidDistribution(format!("bad number in {key}: `{v}`")))
                })
                .collect()
        };
        let spec = match family.trim() {
            "gaussian" => Self::Gaussian { sigma: num("sigma", 1.0)? },
            "laplace" => Self::Laplace { sigma: num("sigma", 1.0)? },
            "uniform_pm1" => Self::UniformPm1 { sigma: num("sigma", 1.0)? },
            "rademacher" => Self::Rademacher { sigma: num("sigma", 1.0)? },
            "point_mass_zero" => Self::PointMassZero,
            "uniform_sphere" => Self::UniformSphere,
            "zero_inflated" => {
                let base = params.get("base").map(String::as_str).unwrap_or("gaussian");
                let mut base: DistributionSpec = base.parse()?;
                if let Some(sigma) = params.get("sigma") {
                    base = format!("{}:sigma={sigma}", base.name()).parse()?;
                }
                Self::ZeroInflated { p: num("p", 0.0)?, base: Box::new(base) }
            }
            "scale_mixture_gaussian" => {
                Self::ScaleMixtureGaussian { sigmas: list("sigmas")?, weights: list("weights")? }
            }
            other => return Err(Error::InvalidDistribution(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join("/");
        match self {
            Self::Gaussian { sigma }
            | Self::Laplace { sigma }
            | Self::UniformPm1 { sigma }
            | Self::Rademacher { sigma } => write!(f, "{}:sigma={sigma}", self.name()),
            Self::PointMassZero | Self::UniformSphere => f.write_str(self.name()),
            Self::ZeroInflated { p, base } => {
                let sigma = match **base {
                    Self::Gaussian { sigma } | Self::Laplace { sigma } | Self::UniformPm1 { sigma } => sigma,
                    _ => 1.0,
                };
                write!(f, "zero_inflated:p={p},base={},sigma={sigma}", base.name())
            }
            Self::ScaleMixtureGaussian { sigmas, weights } => {
                write!(f, "scale_mixture_gaussian:sigmas={},weights={}", join(sigmas), join(weights))
            }
        }
    }
}

/// `m x n` sample with every entry an independent draw from a scalar family.
pub fn sample_iid_components(spec: &DistributionSpec, m: usize, n: usize, rs: &RandomSource) -> Result<VectorSample> {
    spec.validate()?;
    if !spec.is_scalar() {
        return Err(Error::InvalidDistribution(format!(
            "{} has no i.i.d. scalar marginal",
            spec.name()
        )));
    }
    check_shape(m, n)?;
    let mut rng = rs.rng();
    let data = (0..m * n).map(|_| spec.draw_scalar(&mut rng)).collect();
    Ok(VectorSample::from_flat_unchecked(m, n, data))
}

pub fn sample_gaussian_vectors(m: usize, n: usize, sigma: f64, rs: &RandomSource) -> Result<VectorSample> {
    sample_iid_components(&DistributionSpec::Gaussian { sigma }, m, n, rs)
}

/// Uniform on the unit sphere `S^{n-1}` via normalized Gaussian vectors.
pub fn sample_uniform_sphere(m: usize, n: usize, rs: &RandomSource) -> Result<VectorSample> {
    check_shape(m, n)?;
    let mut rng = rs.rng();
    let mut data = Vec::with_capacity(m * n);
    let mut row = vec![0.0; n];
    for _ in 0..m {
        loop {
            for x in row.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 && norm.is_finite() {
                data.extend(row.iter().map(|x| x / norm));
                break;
            }
        }
    }
    Ok(VectorSample::from_flat_unchecked(m, n, data))
}

/// Gaussian scale mixture sharing one scale per row.
pub fn sample_scale_mixture(
    m: usize,
    n: usize,
    sigmas: &[f64],
    weights: &[f64],
    rs: &RandomSource,
) -> Result<VectorSample> {
    validate_mixture(sigmas, weights)?;
    check_shape(m, n)?;
    let index = WeightedIndex::new(weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut rng = rs.rng();
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        let sigma = sigmas[index.sample(&mut rng)];
        data.extend((0..n).map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        }));
    }
    Ok(VectorSample::from_flat_unchecked(m, n, data))
}

pub fn sample_zero_inflated(
    m: usize,
    n: usize,
    p: f64,
    base: &DistributionSpec,
    rs: &RandomSource,
) -> Result<VectorSample> {
    let spec = DistributionSpec::ZeroInflated { p, base: Box::new(base.clone()) };
    sample_iid_components(&spec, m, n, rs)
}

/// Dispatches any family to its sampler.
pub fn sample(spec: &DistributionSpec, m: usize, n: usize, rs: &RandomSource) -> Result<VectorSample> {
    match spec {
        DistributionSpec::UniformSphere => sample_uniform_sphere(m, n, rs),
        DistributionSpec::ScaleMixtureGaussian { sigmas, weights } => {
            sample_scale_mixture(m, n, sigmas, weights, rs)
        }
        _ => sample_iid_components(spec, m, n, rs),
    }
}

fn check_shape(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(())
}
