//! Experiments on the basic structure of spherical laws: identical
//! marginals, radial characteristic functions, extension from two to many
//! coordinates, the zero-atom dichotomy and uniformity of directions.

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiments::report::{Bound, ExperimentReport, ReportBuilder};
use crate::experiments::{bonferroni, experiment_root, rate, replicate, CF_DRAWS};
use crate::rng::RandomSource;
use crate::sample::VectorSample;
use crate::samplers::{self, sample_uniform_sphere, DistributionSpec};
use crate::stats::ecf::default_probe_grid;
use crate::stats::{
    cf_radiality_residual, ks_two_sample_values, marginal_moment_checks, rotation_invariance_test,
    DEFAULT_K_ROTATIONS,
};

/// Dimension used by the identical-components experiment.
pub const IDENTICAL_DIM: usize = 4;

type SamplerFn = dyn Fn(usize, usize, &RandomSource) -> Result<VectorSample> + Send + Sync;

/// A labelled source of `m x n` samples.
pub struct Input {
    pub label: String,
    sampler: Box<SamplerFn>,
}

impl Input {
    pub fn spec(label: &str, spec: DistributionSpec) -> Self {
        Self { label: label.to_string(), sampler: Box::new(move |m, n, rs| samplers::sample(&spec, m, n, rs)) }
    }

    pub fn custom(
        label: &str,
        f: impl Fn(usize, usize, &RandomSource) -> Result<VectorSample> + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.to_string(), sampler: Box::new(f) }
    }

    pub fn draw(&self, m: usize, n: usize, rs: &RandomSource) -> Result<VectorSample> {
        (self.sampler)(m, n, rs)
    }
}

fn mixture_1_2() -> DistributionSpec {
    DistributionSpec::ScaleMixtureGaussian { sigmas: vec![1.0, 2.0], weights: vec![0.5, 0.5] }
}

/// Gaussian columns with standard deviations 1, 1.25, 1.5, ... : identical
/// means and zero correlations but different marginals.
fn unequal_scales() -> Input {
    Input::custom("unequal_scales", |m, n, rs| {
        let base = samplers::sample_gaussian_vectors(m, n, 1.0, rs)?;
        let data = base
            .rows()
            .flat_map(|r| r.iter().enumerate().map(|(j, x)| x * (1.0 + 0.25 * j as f64)).collect::<Vec<_>>())
            .collect();
        VectorSample::from_flat(m, n, data)
    })
}

struct ComponentStats {
    reject_rate: f64,
    mean_z: f64,
    corr_z: f64,
}

fn identical_components_arm(cfg: &ExperimentConfig, root: &RandomSource, input: &Input) -> Result<ComponentStats> {
    let arm = root.split_named(&input.label);
    let d = IDENTICAL_DIM;
    let rejects = replicate(&arm, cfg.replications, |_, rs| {
        let vs = input.draw(cfg.m, d, rs)?;
        let half = vs.m() / 2;
        let a = vs.slice_rows(0, half)?;
        let b = vs.slice_rows(half, vs.m())?;
        let mut tests = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let ai = a.column(i)?;
                let bj = b.column(j)?;
                tests.push(ks_two_sample_values(ai.values(), bj.values(), cfg.alpha)?);
            }
        }
        Ok(bonferroni(&tests, cfg.alpha).reject)
    })?;

    let vs = input.draw(cfg.m, d, &arm.split_named("moments"))?;
    let summary = marginal_moment_checks(&vs)?;
    let m = vs.m() as f64;
    let cols: Vec<Vec<f64>> = (0..d).map(|j| vs.column(j).map(|c| c.into_vec())).collect::<Result<_>>()?;
    let sd: Vec<f64> = cols.iter().map(|c| (c.iter().map(|x| x * x).sum::<f64>() / m).sqrt()).collect();
    let mean_z = summary
        .means
        .iter()
        .zip(&sd)
        .map(|(mu, s)| if *s > 0.0 { mu.abs() / (s / m.sqrt()) } else { 0.0 })
        .fold(0.0, f64::max);
    // Standard error of a correlation between uncorrelated but possibly
    // dependent coordinates: sqrt(E X_i^2 X_j^2) / (sd_i sd_j sqrt(m)).
    let corr_z = summary
        .pair_correlations
        .iter()
        .map(|p| {
            let e4 = cols[p.i].iter().zip(&cols[p.j]).map(|(x, y)| x * x * y * y).sum::<f64>() / m;
            let se = e4.sqrt() / (sd[p.i] * sd[p.j] * m.sqrt());
            if se > 0.0 {
                p.value.abs() / se
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(ComponentStats { reject_rate: rate(rejects), mean_z, corr_z })
}

/// Checks every input as a candidate spherical law: pairwise KS between
/// columns (split halves, Bonferroni) must behave like a true null and the
/// column means and correlations must be within `moment_z` standard errors
/// of zero.
pub fn identical_components_report(cfg: &ExperimentConfig, name: &str, inputs: &[Input]) -> Result<ExperimentReport> {
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let z = cfg.tol("moment_z");
    for input in inputs {
        let s = identical_components_arm(cfg, &root, input)?;
        b.check_null_rate(format!("{}.pairwise_ks_reject_rate", input.label), s.reject_rate);
        b.check(format!("{}.max_mean_z", input.label), s.mean_z, Bound::AtMost(z));
        b.check(format!("{}.max_corr_z", input.label), s.corr_z, Bound::AtMost(z));
    }
    Ok(b.finish())
}

pub fn exp_identical_components(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_identical_components";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let z = cfg.tol("moment_z");
    for input in [Input::spec("gaussian", DistributionSpec::gaussian(1.0)), Input::spec("scale_mixture", mixture_1_2())] {
        let s = identical_components_arm(cfg, &root, &input)?;
        b.check_null_rate(format!("{}.pairwise_ks_reject_rate", input.label), s.reject_rate);
        b.check(format!("{}.max_mean_z", input.label), s.mean_z, Bound::AtMost(z));
        b.check(format!("{}.max_corr_z", input.label), s.corr_z, Bound::AtMost(z));
    }
    // Expected-failure control: marginals differ, the KS comparison must see it.
    let control = unequal_scales();
    let s = identical_components_arm(cfg, &root, &control)?;
    b.check_power("unequal_scales.pairwise_ks_reject_rate", s.reject_rate);
    b.metric("unequal_scales.max_mean_z", s.mean_z);
    Ok(b.finish())
}

pub fn exp_cf_radiality(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_cf_radiality";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let tol = cfg.tol("cf_residual_max");
    let control = cfg.tol("cf_residual_control_min");

    let arms = [
        ("gaussian", DistributionSpec::gaussian(1.0), 2, Bound::AtMost(tol)),
        ("uniform_sphere", DistributionSpec::UniformSphere, 3, Bound::AtMost(tol)),
        ("scale_mixture", mixture_1_2(), 2, Bound::AtMost(tol)),
        ("laplace", DistributionSpec::laplace(), 2, Bound::AtLeast(control)),
    ];
    for (label, spec, n, bound) in arms {
        let vs = samplers::sample(&spec, CF_DRAWS, n, &root.split_named(label))?;
        let probes = default_probe_grid(n);
        let residual = cf_radiality_residual(&vs, &probes)?;
        b.check(format!("{label}.n{n}.cf_radiality_residual"), residual, bound);
        if n == 2 {
            let first = vs.column(0)?;
            let profile = probes
                .iter()
                .map(|t| {
                    let r = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let joint = crate::stats::ecf::ecf_vector_at(&vs, t)?;
                    let radial = crate::stats::ecf::ecf_at(first.values(), r);
                    Ok((r, (joint - radial).norm()))
                })
                .collect::<Result<Vec<_>>>()?;
            b.series(format!("{label}_radiality_gap"), profile);
        }
    }
    Ok(b.finish())
}

fn rotation_reject_rate(
    cfg: &ExperimentConfig,
    arm: &RandomSource,
    input: &Input,
    n: usize,
) -> Result<(f64, crate::stats::TestResult)> {
    let results = replicate(arm, cfg.replications, |_, rs| {
        let vs = input.draw(cfg.m, n, &rs.split(0))?;
        rotation_invariance_test(&vs, &rs.split(1), DEFAULT_K_ROTATIONS, cfg.alpha)
    })?;
    Ok((rate(results.iter().map(|r| r.reject)), results[0]))
}

pub fn exp_extension_2_to_n(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_extension_2_to_n";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let tol = cfg.tol("cf_residual_max");
    let gaussian = Input::spec("gaussian", DistributionSpec::gaussian(1.0));
    let point = Input::spec("point_mass_zero", DistributionSpec::PointMassZero);

    for &n in &cfg.n_list {
        let arm = root.split_named("gaussian").split(n as u64);
        if n >= 2 {
            let (r, first) = rotation_reject_rate(cfg, &arm.split_named("rotation"), &gaussian, n)?;
            b.check_null_rate(format!("gaussian.n{n}.rotation_reject_rate"), r);
            b.test(format!("gaussian.n{n}.rotation[0]"), first);

            let (r, _) = rotation_reject_rate(cfg, &root.split_named("point").split(n as u64), &point, n)?;
            b.check(format!("point_mass_zero.n{n}.rotation_reject_rate"), r, Bound::AtMost(0.0));
        }
        let vs = gaussian.draw(CF_DRAWS, n, &arm.split_named("cf"))?;
        let residual = cf_radiality_residual(&vs, &default_probe_grid(n))?;
        b.check(format!("gaussian.n{n}.cf_radiality_residual"), residual, Bound::AtMost(tol));

        let zeros = point.draw(CF_DRAWS.min(cfg.m), n, &arm)?;
        let residual = cf_radiality_residual(&zeros, &default_probe_grid(n))?;
        b.check(format!("point_mass_zero.n{n}.cf_radiality_residual"), residual, Bound::AtMost(0.0));
    }

    // The i.i.d. Laplace pair is already non-spherical in two dimensions.
    let laplace = Input::spec("laplace", DistributionSpec::laplace());
    let (r, first) = rotation_reject_rate(cfg, &root.split_named("laplace"), &laplace, 2)?;
    b.check_power("laplace.n2.rotation_reject_rate", r);
    b.test("laplace.n2.rotation[0]", first);
    Ok(b.finish())
}

pub fn exp_zero_atom_dichotomy(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_zero_atom_dichotomy";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);
    let base = DistributionSpec::gaussian(1.0);

    for p in [0.0, 0.1, 0.3, 0.5, 1.0] {
        let label = format!("p{p}");
        let input = Input::spec(&label, DistributionSpec::ZeroInflated { p, base: Box::new(base.clone()) });
        let (r, first) = rotation_reject_rate(cfg, &root.split_named(&label), &input, 2)?;
        let metric = format!("zero_inflated.{label}.rotation_reject_rate");
        if p == 0.0 {
            b.check_null_rate(metric, r);
        } else if p == 1.0 {
            b.check(metric, r, Bound::AtMost(0.0));
        } else {
            b.check_power(metric, r);
        }
        b.test(format!("zero_inflated.{label}.rotation[0]"), first);
    }
    Ok(b.finish())
}

pub fn exp_uniform_sphere(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let name = "exp_uniform_sphere";
    let root = experiment_root(cfg, name);
    let mut b = ReportBuilder::new(name, cfg);

    let arms = [
        ("gaussian", DistributionSpec::gaussian(1.0), 3, true),
        ("scale_mixture", mixture_1_2(), 3, true),
        ("laplace", DistributionSpec::laplace(), 2, false),
    ];
    for (label, spec, n, spherical) in arms {
        let arm = root.split_named(label);
        let results = replicate(&arm, cfg.replications, |_, rs| {
            let directions = samplers::sample(&spec, cfg.m, n, &rs.split(0))?.normalized_rows()?;
            let uniform = sample_uniform_sphere(cfg.m, n, &rs.split(1))?;
            let tests = (0..n)
                .map(|j| {
                    ks_two_sample_values(directions.column(j)?.values(), uniform.column(j)?.values(), cfg.alpha)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(bonferroni(&tests, cfg.alpha))
        })?;
        let r = rate(results.iter().map(|t| t.reject));
        let metric = format!("{label}.n{n}.direction_ks_reject_rate");
        if spherical {
            b.check_null_rate(metric, r);
        } else {
            b.check_power(metric, r);
        }
        b.test(format!("{label}.n{n}.direction_ks[0]"), results[0]);
    }

    let sphere = sample_uniform_sphere(cfg.m, 3, &root.split_named("norms"))?;
    let worst = sphere.row_norms().values().iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    b.check("uniform_sphere.n3.max_norm_error", worst, Bound::AtMost(cfg.tol("sphere_norm_tol")));
    let first = sphere.column(0)?.into_vec();
    b.series("uniform_sphere_n3_coordinate_hist", crate::experiments::histogram(&first, 40, -1.0, 1.0));
    Ok(b.finish())
}
