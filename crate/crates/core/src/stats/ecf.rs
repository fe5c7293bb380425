//! Empirical characteristic functions and the statistics built on them:
//! radiality of the multivariate CF, the product functional equation
//! `phi(s) phi(t) = phi(sqrt(s^2 + t^2))`, and the quadratic fit of `log phi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::sample::{ScalarSample, VectorSample};
use crate::samplers::sample_uniform_sphere;

/// Values of `(1/m) sum_k exp(i t x_k)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCF {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    m: usize,
}

impl EmpiricalCF {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }
}

/// ECF of scalar observations at a single point. Exactly `1` at `t = 0`.
pub fn ecf_at(values: &[f64], t: f64) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &x in values {
        let (s, c) = (t * x).sin_cos();
        re += c;
        im += s;
    }
    let m = values.len() as f64;
    Complex64::new(re / m, im / m)
}

/// Multivariate ECF `(1/m) sum_k exp(i <t, x_k>)`.
pub fn ecf_vector_at(vs: &VectorSample, t: &[f64]) -> Result<Complex64> {
    if t.len() != vs.n() {
        return Err(Error::DimensionMismatch { expected: vs.n(), got: t.len() });
    }
    let (mut re, mut im) = (0.0, 0.0);
    for row in vs.rows() {
        let dot: f64 = row.iter().zip(t).map(|(x, s)| x * s).sum();
        let (s, c) = dot.sin_cos();
        re += c;
        im += s;
    }
    let m = vs.m() as f64;
    Ok(Complex64::new(re / m, im / m))
}

pub fn empirical_cf(s: &ScalarSample, grid: &[f64]) -> EmpiricalCF {
    EmpiricalCF {
        grid: grid.to_vec(),
        values: grid.iter().map(|&t| ecf_at(s.values(), t)).collect(),
        m: s.len(),
    }
}

/// `max_t |phi_vec(t) - phi_1(|t|)|` where `phi_vec` is the ECF of the full
/// rows and `phi_1` the ECF of the first coordinate. Zero for a spherically
/// symmetric law up to sampling noise.
pub fn cf_radiality_residual(vs: &VectorSample, directions: &[Vec<f64>]) -> Result<f64> {
    let first = vs.column(0)?;
    let mut worst = 0.0f64;
    for t in directions {
        if t.len() != vs.n() {
            return Err(Error::DimensionMismatch { expected: vs.n(), got: t.len() });
        }
        let radius = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        if radius == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let joint = ecf_vector_at(vs, t)?;
        let radial = ecf_at(first.values(), radius);
        worst = worst.max((joint - radial).norm());
    }
    Ok(worst)
}

/// Probe vectors for [`cf_radiality_residual`]: `directions` unit vectors
/// scaled by each radius. In two dimensions the directions are evenly spaced
/// angles in `[0, pi)`; in one dimension they are `+-1`; otherwise they come
/// from a fixed-seed uniform draw on the sphere.
pub fn radial_probe_grid(n: usize, directions: usize, radii: &[f64]) -> Vec<Vec<f64>> {
    let units: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..directions)
            .map(|k| {
                let theta = std::f64::consts::PI * k as f64 / directions as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        _ => {
            let draw = sample_uniform_sphere(directions, n, &RandomSource::new(0x5eed).split(n as u64))
                .expect("non-empty probe draw");
            draw.rows().map(<[f64]>::to_vec).collect()
        }
    };
    radii
        .iter()
        .flat_map(|&r| units.iter().map(move |u| u.iter().map(|x| x * r).collect()))
        .collect()
}

/// The default probe set: 20 directions at radii 1, 2 and 3.
pub fn default_probe_grid(n: usize) -> Vec<Vec<f64>> {
    radial_probe_grid(n, 20, &[1.0, 2.0, 3.0])
}

/// All `(s, t)` with both coordinates on `steps` evenly spaced points of
/// `[-half_width, half_width]`.
pub fn square_pair_grid(half_width: f64, steps: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * half_width / (steps - 1) as f64;
    let axis: Vec<f64> = (0..steps).map(|i| -half_width + h * i as f64).collect();
    axis.iter().flat_map(|&s| axis.iter().map(move |&t| (s, t))).collect()
}

/// `max |phi(s) phi(t) - phi(sqrt(s^2 + t^2))|` over the given pairs.
pub fn functional_equation_residual(s: &ScalarSample, pairs: &[(f64, f64)]) -> f64 {
    let x = s.values();
    pairs
        .iter()
        .map(|&(a, b)| (ecf_at(x, a) * ecf_at(x, b) - ecf_at(x, a.hypot(b))).norm())
        .fold(0.0, f64::max)
}

/// Least-squares fit of `log Re phi(t) = c t^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogCfFit {
    pub c: f64,
    pub max_fit_residual: f64,
    pub used_points: usize,
}

/// Points where `Re phi < 0.1` are discarded before taking logs.
pub const LOG_CF_FLOOR: f64 = 0.1;

pub fn fit_log_cf_quadratic(s: &ScalarSample, grid: &[f64]) -> Result<LogCfFit> {
    let used: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&t| {
            let re = ecf_at(s.values(), t).re;
            (re >= LOG_CF_FLOOR).then(|| (t * t / 2.0, re.ln()))
        })
        .collect();
    let qq: f64 = used.iter().map(|(q, _)| q * q).sum();
    if used.len() < 3 || qq == 0.0 {
        return Err(Error::TooFewGridPoints { got: used.len() });
    }
    let c = used.iter().map(|(q, psi)| q * psi).sum::<f64>() / qq;
    let max_fit_residual = used.iter().map(|(q, psi)| (psi - c * q).abs()).fold(0.0, f64::max);
    Ok(LogCfFit { c, max_fit_residual, used_points: used.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CfGrid;
    use crate::samplers::{sample_gaussian_vectors, sample_iid_components, DistributionSpec};
    use proptest::prelude::*;

    fn rs(seed: u64) -> RandomSource {
        RandomSource::new(seed).split(23)
    }

    fn gaussian(m: usize, sigma: f64, seed: u64) -> ScalarSample {
        sample_gaussian_vectors(m, 1, sigma, &rs(seed)).unwrap().column(0).unwrap()
    }

    fn laplace_cf(t: f64) -> f64 {
        1.0 / (1.0 + t * t / 2.0)
    }

    #[test]
    fn value_at_zero_is_exactly_one() {
        let s = ScalarSample::new(vec![0.3, -7.0, 12.5]).unwrap();
        let cf = empirical_cf(&s, &[0.0]);
        assert_eq!(cf.values()[0], Complex64::new(1.0, 0.0));
        assert_eq!(cf.m(), 3);
    }

    #[test]
    fn two_point_sample_gives_cosine() {
        let s = ScalarSample::new(vec![1.0, -1.0]).unwrap();
        for t in [-2.5, -0.3, 0.7, 1.9, 3.0] {
            let v = ecf_at(s.values(), t);
            assert!((v.re - t.cos()).abs() <= 1e-15);
            assert!(v.im.abs() <= 1e-15);
        }
    }

    #[test]
    fn gaussian_ecf_near_truth() {
        let v = ecf_at(gaussian(50_000, 1.0, 1).values(), 1.0);
        assert!((v - Complex64::new((-0.5f64).exp(), 0.0)).norm() <= 0.02);
    }

    #[test]
    fn radiality_point_mass_is_zero() {
        let vs = sample_iid_components(&DistributionSpec::PointMassZero, 100, 2, &rs(0)).unwrap();
        assert_eq!(cf_radiality_residual(&vs, &default_probe_grid(2)).unwrap(), 0.0);
    }

    #[test]
    fn radiality_gaussian_small() {
        let vs = sample_gaussian_vectors(50_000, 2, 1.0, &rs(2)).unwrap();
        let r = cf_radiality_residual(&vs, &default_probe_grid(2)).unwrap();
        assert!(r <= 0.03, "{r}");
    }

    #[test]
    fn radiality_laplace_large() {
        // Oracle: at t = (sqrt 2, sqrt 2) the product CF is 1/4, the radial CF 1/3.
        let gap = (laplace_cf(2f64.sqrt()).powi(2) - laplace_cf(2.0)).abs();
        assert!((gap - 1.0 / 12.0).abs() < 1e-12);
        let vs = sample_iid_components(&DistributionSpec::laplace(), 50_000, 2, &rs(3)).unwrap();
        let r = cf_radiality_residual(&vs, &default_probe_grid(2)).unwrap();
        assert!(r >= 0.05, "{r}");
    }

    #[test]
    fn radiality_errors() {
        let vs = sample_gaussian_vectors(10, 2, 1.0, &rs(0)).unwrap();
        assert!(matches!(cf_radiality_residual(&vs, &[vec![1.0, 0.0, 0.0]]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(cf_radiality_residual(&vs, &[vec![0.0, 0.0]]), Err(Error::ZeroDirection));
    }

    #[test]
    fn probe_grid_shapes() {
        let g = default_probe_grid(2);
        assert_eq!(g.len(), 60);
        assert!(g.iter().all(|t| t.iter().map(|x| x * x).sum::<f64>().sqrt() <= 3.0 + 1e-12));
        assert_eq!(default_probe_grid(5).len(), 60);
        assert_eq!(default_probe_grid(5), default_probe_grid(5));
        assert_eq!(radial_probe_grid(1, 20, &[2.0]), vec![vec![2.0], vec![-2.0]]);
    }

    #[test]
    fn functional_equation_examples() {
        let pairs = square_pair_grid(2.0, 9);
        assert_eq!(pairs.len(), 81);
        let zeros = ScalarSample::new(vec![0.0; 10]).unwrap();
        assert_eq!(functional_equation_residual(&zeros, &pairs), 0.0);

        let r = functional_equation_residual(&gaussian(50_000, 1.0, 4), &pairs);
        assert!(r <= 0.03, "{r}");

        // Oracle gap for the exact Laplace CF on this grid.
        let oracle = pairs
            .iter()
            .map(|&(s, t)| (laplace_cf(s) * laplace_cf(t) - laplace_cf(s.hypot(t))).abs())
            .fold(0.0, f64::max);
        assert!(oracle > 0.08, "{oracle}");
        let lap = sample_iid_components(&DistributionSpec::laplace(), 50_000, 1, &rs(5)).unwrap();
        let r = functional_equation_residual(&lap.column(0).unwrap(), &pairs);
        assert!(r >= 0.04, "{r}");
    }

    #[test]
    fn log_cf_fit_recovers_variance() {
        let grid = CfGrid::default().points();
        let fit = fit_log_cf_quadratic(&gaussian(50_000, 1.0, 6), &grid).unwrap();
        assert!(fit.c > -1.05 && fit.c < -0.95, "{fit:?}");
        let fit = fit_log_cf_quadratic(&gaussian(50_000, 2.0, 7), &grid).unwrap();
        assert!(fit.c > -4.2 && fit.c < -3.8, "{fit:?}");
    }

    #[test]
    fn log_cf_fit_flags_rademacher() {
        let grid = CfGrid::default().points();
        // Oracle on the exact CF cos t: same floor, same least squares.
        let used: Vec<(f64, f64)> =
            grid.iter().filter(|t| t.cos() >= LOG_CF_FLOOR).map(|&t| (t * t / 2.0, t.cos().ln())).collect();
        let c = used.iter().map(|(q, p)| q * p).sum::<f64>() / used.iter().map(|(q, _)| q * q).sum::<f64>();
        let oracle = used.iter().map(|(q, p)| (p - c * q).abs()).fold(0.0, f64::max);
        assert!((oracle - 0.298).abs() < 1e-3, "{oracle}");

        let rad = sample_iid_components(&DistributionSpec::Rademacher { sigma: 1.0 }, 50_000, 1, &rs(8)).unwrap();
        let fit = fit_log_cf_quadratic(&rad.column(0).unwrap(), &grid).unwrap();
        assert!(fit.max_fit_residual >= 0.1, "{fit:?}");
    }

    #[test]
    fn log_cf_fit_needs_three_points() {
        let s = gaussian(1000, 1.0, 9);
        assert_eq!(fit_log_cf_quadratic(&s, &[0.0, 1.0]), Err(Error::TooFewGridPoints { got: 2 }));
        // A wide law leaves only t = 0 above the floor.
        let wide = gaussian(1000, 50.0, 9);
        assert!(matches!(fit_log_cf_quadratic(&wide, &[0.0, 1.0, 2.0, 3.0]), Err(Error::TooFewGridPoints { .. })));
    }

    #[test]
    fn residuals_shrink_with_sample_size() {
        // Median residual over 50 seeds at 2m is no larger than at m.
        let pairs = square_pair_grid(2.0, 5);
        let median = |m: usize, offset: u64| {
            let mut r: Vec<f64> =
                (0..50).map(|k| functional_equation_residual(&gaussian(m, 1.0, offset + k), &pairs)).collect();
            r.sort_unstable_by(f64::total_cmp);
            (r[24] + r[25]) / 2.0
        };
        assert!(median(4_000, 1000) <= median(2_000, 2000));
    }

    proptest! {
        #[test]
        fn ecf_bounded(values in prop::collection::vec(-1e3f64..1e3, 1..40), t in -50.0f64..50.0) {
            prop_assert!(ecf_at(&values, t).norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn log_fit_even_under_negation(seed in 0u64..1000) {
            let s = gaussian(2_000, 1.0, seed);
            let neg = s.map(|x| -x).unwrap();
            let grid = CfGrid::default().points();
            prop_assert_eq!(fit_log_cf_quadratic(&s, &grid).unwrap(), fit_log_cf_quadratic(&neg, &grid).unwrap());
        }
    }
}
