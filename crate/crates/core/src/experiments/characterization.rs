//! Experiments on the normal characterization itself: the ratio statistic
//! and the norm's law of large numbers, the partial-sum identity, the
//! dependent scale-mixture counterexample and the CF functional equation.

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiments::report::{Bound, ExperimentReport, ReportBuilder};
use crate::experiments::{experiment_root, histogram, normal_qq, rate, replicate};
use crate::linalg::{apply_rotation, householder_complete, project_rows};
use crate::sample::{ScalarSample, VectorSample};
use crate::samplers::{self, sample_gaussian_vectors, DistributionSpec};
use crate::stats::ecf::{ecf_at, square_pair_grid, LOG_CF_FLOOR};
use crate::stats::{
    fit_log_cf_quadratic, functional_equation_residual, ks_two_sample_values, marginal_moment_checks,
    rotation_invariance_test, DEFAULT_K_ROTATIONS,
};

/// Sample size for characteristic-function statistics.
pub const CF_DRAWS: usize = 50_000;
/// Sample size for covariance-of-squares estimates.
pub const COV_DRAWS: usize = 200_000;
/// Dimension of the single-draw law-of-large-numbers check.
pub const SLLN_DIM: usize = 1_000_000;
pub const PARTIAL_SUM_DIMS: [usize; 4] = [2, 4, 16, 64];

/// `sqrt(n) x_1 / |x|` per row; zero rows map to 0.
pub fn ratio_statistic(vs: &VectorSample) -> Vec<f64> {
    let scale = (vs.n() as f64).sqrt();
    vs.rows()
        .map(|r| {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                scale * r[0] / norm
            } else {
                0.0
            }
        })
        .collect()
}

fn mixture_1_2() -> DistributionSpec {
    DistributionSpec::ScaleMixtureGaussian { sigmas: vec![1.0, 2.0], weights: vec![0.5, 0.5] }
}

pub fn exp_main_slln_ratio(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_main_slln_ratio";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let largest = cfg.max_n();

    struct Rep {
        ratio_vs_gaussian: bool,
        ratio_vs_normal: Option<bool>,
        marginal_vs_normal: Option<bool>,
    }

    for (label, spec) in [("gaussian", DistributionSpec::gaussian(1.0)), ("scale_mixture", mixture_1_2())] {
        let scale = spec.second_moment().sqrt();
        for &n in &cfg.n_list {
            let arm = root.split_named(label).split(n as u64);
            let reps = replicate(&arm, cfg.replications, |_, rs| {
                let x = samplers::sample(&spec, cfg.m, n, &rs.split(0))?;
                let z = sample_gaussian_vectors(cfg.m, n, 1.0, &rs.split(1))?;
                let rx = ratio_statistic(&x);
                let ratio_vs_gaussian = ks_two_sample_values(&rx, &ratio_statistic(&z), cfg.alpha)?.reject;
                let (mut ratio_vs_normal, mut marginal_vs_normal) = (None, None);
                if n == largest {
                    let fresh = sample_gaussian_vectors(cfg.m, 1, 1.0, &rs.split(2))?.into_column0();
                    ratio_vs_normal = Some(ks_two_sample_values(&rx, &fresh, cfg.alpha)?.reject);
                    let marginal: Vec<f64> = x.rows().map(|r| r[0] / scale).collect();
                    marginal_vs_normal = Some(ks_two_sample_values(&marginal, &fresh, cfg.alpha)?.reject);
                }
                Ok(Rep { ratio_vs_gaussian, ratio_vs_normal, marginal_vs_normal })
            })?;
            b.check_null_rate(
                format!("{label}.n{n}.ratio_vs_gaussian_reject_rate"),
                rate(reps.iter().map(|r| r.ratio_vs_gaussian)),
            );
            if n == largest {
                // The ratio is distribution-free over spherical laws, so it
                // reaches N(0,1) for the mixture too.
                b.check_null_rate(
                    format!("{label}.n{n}.ratio_vs_normal_reject_rate"),
                    rate(reps.iter().filter_map(|r| r.ratio_vs_normal)),
                );
                let marginal = rate(reps.iter().filter_map(|r| r.marginal_vs_normal));
                let metric = format!("{label}.marginal_vs_normal_reject_rate");
                if label == "gaussian" {
                    b.check_null_rate(metric, marginal);
                } else {
                    // Spherical but dependent: the marginal is not normal.
                    b.check_power(metric, marginal);
                }
            }
        }
        let x = samplers::sample(&spec, cfg.m, largest, &root.split_named(label).split_named("plot"))?;
        b.series(format!("{label}_n{largest}_ratio_hist"), histogram(&ratio_statistic(&x), 60, -4.0, 4.0));
    }

    // Norm growth: |x_n| / sqrt(n) against sqrt(E X^2), one draw per seed.
    let tol = cfg.tol("slln_rel_err");
    let within = cfg.tol("slln_seed_fraction");
    for (label, spec) in [("gaussian", DistributionSpec::gaussian(1.0)), ("scale_mixture", mixture_1_2())] {
        let target = spec.second_moment().sqrt();
        let arm = root.split_named("slln").split_named(label);
        let errors = replicate(&arm, cfg.replications, |_, rs| {
            let x = samplers::sample(&spec, 1, SLLN_DIM, rs)?;
            let norm = x.row_norms().values()[0] / (SLLN_DIM as f64).sqrt();
            Ok((norm - target).abs() / target)
        })?;
        let frac = rate(errors.iter().map(|&e| e <= tol));
        b.metric(format!("{label}.slln_max_rel_err"), errors.iter().copied().fold(0.0, f64::max));
        let metric = format!("{label}.slln_within_tol_fraction");
        if label == "gaussian" {
            b.check(metric, frac, Bound::AtLeast(within));
        } else {
            // A shared random scale makes |x_n|/sqrt(n) converge to sigma, not sqrt(E X^2).
            b.check(metric, frac, Bound::AtMost(1.0 - within));
        }
    }

    let trace = samplers::sample(&DistributionSpec::gaussian(1.0), 1, SLLN_DIM, &root.split_named("trace"))?;
    let mut points = Vec::new();
    let mut sum_sq = 0.0;
    let mut next = 1usize;
    for (i, x) in trace.row(0).iter().enumerate() {
        sum_sq += x * x;
        if i + 1 == next || i + 1 == SLLN_DIM {
            points.push(((i + 1) as f64, (sum_sq / (i + 1) as f64).sqrt()));
            next *= 2;
        }
    }
    b.series("gaussian_norm_over_sqrt_n", points);
    Ok(b.finish())
}

pub fn exp_partial_sum_identity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_partial_sum_identity";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);

    let averaging = |n: usize| householder_complete(&vec![1.0 / (n as f64).sqrt(); n]);

    for n in PARTIAL_SUM_DIMS {
        let h = averaging(n)?;
        let first_row = h.row(0);
        let arm = root.split_named("gaussian").split(n as u64);
        let rejects = replicate(&arm, cfg.replications, |_, rs| {
            let x = sample_gaussian_vectors(cfg.m, n, 1.0, &rs.split(0))?;
            let s = project_rows(&first_row, &x)?;
            let x1 = sample_gaussian_vectors(cfg.m, 1, 1.0, &rs.split(1))?.into_column0();
            Ok(ks_two_sample_values(&s, &x1, cfg.alpha)?.reject)
        })?;
        b.check_null_rate(format!("gaussian.n{n}.partial_sum_vs_x1_reject_rate"), rate(rejects));

        // First coordinate of H_n x is exactly S_n / sqrt(n).
        let x = sample_gaussian_vectors(cfg.m.min(5_000), n, 1.0, &arm.split_named("identity"))?;
        let rotated = apply_rotation(&h, &x)?;
        let sums = x.row_sums();
        let gap = rotated
            .rows()
            .zip(sums.values())
            .map(|(r, s)| (r[0] - s / (n as f64).sqrt()).abs())
            .fold(0.0, f64::max);
        b.check(
            format!("n{n}.householder_vs_partial_sum_max_gap"),
            gap,
            Bound::AtMost(cfg.tol("partial_sum_identity_tol")),
        );
    }

    // Unit Laplace: S_64/8 is pulled toward N(0,1) and away from X_1.
    let n = 64;
    let h = averaging(n)?;
    let first_row = h.row(0);
    let laplace = DistributionSpec::laplace();
    let reps = replicate(&root.split_named("laplace"), cfg.replications, |_, rs| {
        let x = samplers::sample(&laplace, cfg.m, n, &rs.split(0))?;
        let s = project_rows(&first_row, &x)?;
        let x1 = samplers::sample(&laplace, cfg.m, 1, &rs.split(1))?.into_column0();
        let z = sample_gaussian_vectors(cfg.m, 1, 1.0, &rs.split(2))?.into_column0();
        Ok((ks_two_sample_values(&s, &x1, cfg.alpha)?.reject, ks_two_sample_values(&s, &z, cfg.alpha)?.reject))
    })?;
    b.check_power("laplace.n64.partial_sum_vs_x1_reject_rate", rate(reps.iter().map(|r| r.0)));
    b.check(
        "laplace.n64.partial_sum_vs_normal_accept_rate",
        rate(reps.iter().map(|r| !r.1)),
        Bound::AtLeast(cfg.tol("clt_accept_min")),
    );

    let x = samplers::sample(&laplace, cfg.m, n, &root.split_named("plot"))?;
    b.series("laplace_n64_partial_sum_qq", normal_qq(&project_rows(&first_row, &x)?, 99));
    Ok(b.finish())
}

pub fn exp_dependent_spherical(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_dependent_spherical";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);

    for (label, spec) in [("scale_mixture", mixture_1_2()), ("gaussian", DistributionSpec::gaussian(1.0))] {
        let arm = root.split_named(label);
        let sigma = spec.second_moment().sqrt();
        let reps = replicate(&arm.split_named("tests"), cfg.replications, |_, rs| {
            let x = samplers::sample(&spec, cfg.m, 2, &rs.split(0))?;
            let rotation = rotation_invariance_test(&x, &rs.split(1), DEFAULT_K_ROTATIONS, cfg.alpha)?;
            let matched = sample_gaussian_vectors(cfg.m, 1, sigma, &rs.split(2))?.into_column0();
            let marginal = ks_two_sample_values(&x.column(0)?.into_vec(), &matched, cfg.alpha)?;
            Ok((rotation.reject, marginal.reject))
        })?;
        b.check_null_rate(format!("{label}.rotation_reject_rate"), rate(reps.iter().map(|r| r.0)));

        let marginal = rate(reps.iter().map(|r| r.1));
        let cov_metric = format!("{label}.cov_squares");
        let big = samplers::sample(&spec, COV_DRAWS, 2, &arm.split_named("cov"))?;
        let cov = marginal_moment_checks(&big)?.pair_cov_squares[0].value;
        if label == "gaussian" {
            b.check_null_rate(format!("{label}.marginal_vs_matched_normal_reject_rate"), marginal);
            let abs = cfg.tol("cov_sq_gauss_abs");
            b.check(cov_metric, cov, Bound::Between(-abs, abs));
        } else {
            b.check_power(format!("{label}.marginal_vs_matched_normal_reject_rate"), marginal);
            b.check(
                cov_metric,
                cov,
                Bound::Between(cfg.tol("cov_sq_mixture_lo"), cfg.tol("cov_sq_mixture_hi")),
            );
            let standardized: Vec<f64> = big.rows().map(|r| r[0] / sigma).collect();
            b.series("scale_mixture_marginal_qq", normal_qq(&standardized, 99));
        }
    }
    // Analytic value for the mixture: E sigma^4 - (E sigma^2)^2.
    b.metric("scale_mixture.cov_squares_analytic", 2.25);
    Ok(b.finish())
}

pub fn exp_functional_equation(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_functional_equation";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let pairs = square_pair_grid(2.0, 9);
    let grid = cfg.cf_grid.points();
    let rel = cfg.tol("log_cf_c_rel");

    let draw = |label: &str, spec: &DistributionSpec| -> Result<ScalarSample> {
        samplers::sample(spec, CF_DRAWS, 1, &root.split_named(label))?.column(0)
    };

    for sigma in [1.0f64, 2.0] {
        let label = format!("gaussian_sigma{sigma}");
        let s = draw(&label, &DistributionSpec::gaussian(sigma))?;
        let residual = functional_equation_residual(&s, &pairs);
        let fit = fit_log_cf_quadratic(&s, &grid)?;
        let var = sigma * sigma;
        if sigma == 1.0 {
            b.check(format!("{label}.fe_residual"), residual, Bound::AtMost(cfg.tol("fe_residual_max")));
            b.series(
                "gaussian_ecf_real",
                grid.iter().map(|&t| (t, ecf_at(s.values(), t).re)).collect(),
            );
            b.series(
                "gaussian_log_cf",
                grid.iter()
                    .filter_map(|&t| {
                        let re = ecf_at(s.values(), t).re;
                        (re >= LOG_CF_FLOOR).then(|| (t * t / 2.0, re.ln()))
                    })
                    .collect(),
            );
        } else {
            b.metric(format!("{label}.fe_residual"), residual);
        }
        // c = -sigma^2, i.e. X ~ N(0, -c).
        b.check(format!("{label}.log_cf_c"), fit.c, Bound::Between(-var * (1.0 + rel), -var * (1.0 - rel)));
        b.metric(format!("{label}.log_cf_fit_residual"), fit.max_fit_residual);
    }

    let lap = draw("laplace", &DistributionSpec::laplace())?;
    b.check(
        "laplace.fe_residual",
        functional_equation_residual(&lap, &pairs),
        Bound::AtLeast(cfg.tol("fe_residual_control_min")),
    );
    let fit = fit_log_cf_quadratic(&lap, &grid)?;
    b.metric("laplace.log_cf_c", fit.c);
    b.metric("laplace.log_cf_fit_residual", fit.max_fit_residual);

    let rad = draw("rademacher", &DistributionSpec::Rademacher { sigma: 1.0 })?;
    b.metric("rademacher.fe_residual", functional_equation_residual(&rad, &pairs));
    let fit = fit_log_cf_quadratic(&rad, &grid)?;
    b.metric("rademacher.log_cf_c", fit.c);
    b.check(
        "rademacher.log_cf_fit_residual",
        fit.max_fit_residual,
        Bound::AtLeast(cfg.tol("log_cf_control_residual_min")),
    );
    Ok(b.finish())
}
