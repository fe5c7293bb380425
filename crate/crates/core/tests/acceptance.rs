//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use chrono::Utc;
use rand::Rng;
use spherelab::experiments::{self, ratio_statistic, ExperimentReport, CF_DRAWS, COV_DRAWS, SLLN_DIM};
use spherelab::linalg::{haar_orthogonal, householder_complete, project_rows};
use spherelab::manifest::RunManifest;
use spherelab::samplers::{self, sample_gaussian_vectors, DistributionSpec};
use spherelab::stats::{ks_statistic, ks_two_sample_values, rotation_invariance_test, DEFAULT_K_ROTATIONS};
use spherelab::{ExperimentConfig, RandomSource};

const SEED: u64 = 42;
const CALIBRATION_REPS: usize = 200;
const CALIBRATION_M: usize = 5_000;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

fn metric(reports: &[ExperimentReport], exp: &str, key: &str) -> f64 {
    reports
        .iter()
        .find(|r| r.name == exp)
        .and_then(|r| r.metric(key))
        .unwrap_or(f64::NAN)
}

fn brute_force_ks(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
    a.iter().chain(b).map(|&x| (ecdf(a, x) - ecdf(b, x)).abs()).fold(0.0, f64::max)
}

fn unit_vector(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn c1_orthogonality() -> Outcome {
    let rs = RandomSource::new(SEED).split_named("c1");
    let mut rng = rs.rng();
    let (mut worst, mut exact) = (0.0f64, true);
    for i in 0..1000u64 {
        let n = 1 + (i as usize % 32);
        let u = unit_vector(n, &mut rng);
        let h = householder_complete(&u).expect("householder");
        worst = worst.max(h.defect());
        exact &= h.row(0) == u;
        let q = haar_orthogonal(n, &rs.split(i)).expect("haar");
        worst = worst.max(q.defect());
    }
    Outcome::new(worst <= 1e-10 && exact, format!("max defect {worst:.2e}, first row exact: {exact}"))
}

fn c2_ks_oracle() -> Outcome {
    let mut rng = RandomSource::new(SEED).split_named("c2").rng();
    let mut worst = 0.0f64;
    for i in 0..500 {
        let (ma, mb) = (rng.random_range(1..=50), rng.random_range(1..=50));
        let coarse = i % 2 == 0;
        let mut draw = |m: usize| -> Vec<f64> {
            (0..m)
                .map(|_| {
                    let x: f64 = rng.random_range(-3.0..3.0);
                    if coarse { x.round() } else { x }
                })
                .collect()
        };
        let (a, b) = (draw(ma), draw(mb));
        worst = worst.max((ks_statistic(&a, &b) - brute_force_ks(&a, &b)).abs());
    }
    Outcome::new(worst <= 1e-12, format!("max |D - oracle| = {worst:.2e} over 500 pairs"))
}

fn null_rate(label: &str, f: impl Fn(&RandomSource) -> bool) -> f64 {
    let root = RandomSource::new(SEED).split_named("c3").split_named(label);
    (0..CALIBRATION_REPS).filter(|&r| f(&root.split(r as u64))).count() as f64 / CALIBRATION_REPS as f64
}

fn c3_null_calibration() -> (Outcome, f64) {
    let alpha = 0.05;
    let m = CALIBRATION_M;
    let gauss = |m, n, rs: &RandomSource| sample_gaussian_vectors(m, n, 1.0, rs).unwrap();
    let ks = |a: &[f64], b: &[f64]| ks_two_sample_values(a, b, alpha).unwrap().reject;
    let rotation = |n: usize| {
        move |rs: &RandomSource| {
            rotation_invariance_test(&gauss(m, n, &rs.split(0)), &rs.split(1), DEFAULT_K_ROTATIONS, alpha)
                .unwrap()
                .reject
        }
    };
    let zero_inflated = DistributionSpec::ZeroInflated { p: 0.0, base: Box::new(DistributionSpec::gaussian(1.0)) };
    let averaging = householder_complete(&[0.25; 16]).unwrap().row(0);

    let rates = [
        ("ks_two_sample", null_rate("ks", |rs| ks(&gauss(m, 1, &rs.split(0)).into_column0(), &gauss(m, 1, &rs.split(1)).into_column0()))),
        ("rotation_n2", null_rate("rotation_n2", rotation(2))),
        ("rotation_n16", null_rate("rotation_n16", rotation(16))),
        ("ratio_n64", null_rate("ratio", |rs| ks(&ratio_statistic(&gauss(m, 64, &rs.split(0))), &ratio_statistic(&gauss(m, 64, &rs.split(1)))))),
        ("partial_sum_n16", null_rate("partial_sum", |rs| {
            ks(&project_rows(&averaging, &gauss(m, 16, &rs.split(0))).unwrap(), &gauss(m, 1, &rs.split(1)).into_column0())
        })),
        ("zero_inflated_p0", null_rate("zero_inflated", |rs| {
            let x = samplers::sample(&zero_inflated, m, 2, &rs.split(0)).unwrap();
            rotation_invariance_test(&x, &rs.split(1), DEFAULT_K_ROTATIONS, alpha).unwrap().reject
        })),
    ];
    let ok = rates.iter().all(|(_, r)| (0.01..=0.10).contains(r));
    let detail = rates.iter().map(|(k, r)| format!("{k}={r:.3}")).collect::<Vec<_>>().join(" ");
    (Outcome::new(ok, detail), rates[5].1)
}

fn c4_ratio(reports: &[ExperimentReport]) -> Outcome {
    let exp = "exp_main_slln_ratio";
    let g = metric(reports, exp, "gaussian.n64.ratio_vs_gaussian_reject_rate");
    let mix = metric(reports, exp, "scale_mixture.n64.ratio_vs_gaussian_reject_rate");
    let marginal = metric(reports, exp, "scale_mixture.marginal_vs_normal_reject_rate");
    Outcome::new(
        g <= 0.05 && mix <= 0.05 && marginal >= 0.99,
        format!("gaussian reject {g:.2}, mixture reject {mix:.2}, mixture marginal reject {marginal:.2}"),
    )
}

fn c5_slln(reports: &[ExperimentReport]) -> Outcome {
    let exp = "exp_main_slln_ratio";
    let frac = metric(reports, exp, "gaussian.slln_within_tol_fraction");
    let worst = metric(reports, exp, "gaussian.slln_max_rel_err");
    Outcome::new(
        SLLN_DIM == 1_000_000 && frac >= 0.99,
        format!("n={SLLN_DIM}, within 1%: {frac:.2}, max rel err {worst:.4}"),
    )
}

fn c6_partial_sum(reports: &[ExperimentReport]) -> Outcome {
    let exp = "exp_partial_sum_identity";
    let rates: Vec<(usize, f64)> = [2, 4, 16, 64]
        .iter()
        .map(|&n| (n, metric(reports, exp, &format!("gaussian.n{n}.partial_sum_vs_x1_reject_rate"))))
        .collect();
    let laplace = metric(reports, exp, "laplace.n64.partial_sum_vs_x1_reject_rate");
    let ok = rates.iter().all(|&(_, r)| r <= 0.05) && laplace >= 0.99;
    let detail = rates.iter().map(|(n, r)| format!("n{n}={r:.2}")).collect::<Vec<_>>().join(" ");
    Outcome::new(ok, format!("gaussian reject {detail}; laplace n64 reject {laplace:.2}"))
}

fn c7_functional_equation(reports: &[ExperimentReport]) -> Outcome {
    let exp = "exp_functional_equation";
    let res = metric(reports, exp, "gaussian_sigma1.fe_residual");
    let c1 = metric(reports, exp, "gaussian_sigma1.log_cf_c");
    let c2 = metric(reports, exp, "gaussian_sigma2.log_cf_c");
    let lap = metric(reports, exp, "laplace.fe_residual");
    let ok = CF_DRAWS == 50_000
        && res <= 0.03
        && c1 > -1.05
        && c1 < -0.95
        && c2 > -4.2
        && c2 < -3.8
        && lap >= 0.04;
    Outcome::new(ok, format!("residual {res:.4}, c(N(0,1)) {c1:.4}, c(N(0,4)) {c2:.4}, laplace residual {lap:.4}"))
}

fn c8_cov_squares(reports: &[ExperimentReport]) -> Outcome {
    let exp = "exp_dependent_spherical";
    let mix = metric(reports, exp, "scale_mixture.cov_squares");
    let g = metric(reports, exp, "gaussian.cov_squares");
    let ok = COV_DRAWS == 200_000 && mix > 2.10 && mix < 2.40 && g > -0.1 && g < 0.1;
    Outcome::new(ok, format!("mixture {mix:.4} (oracle 2.25), gaussian {g:.4}"))
}

fn c9_dichotomy(reports: &[ExperimentReport], p0_rate: f64) -> Outcome {
    let exp = "exp_zero_atom_dichotomy";
    let p03 = metric(reports, exp, "zero_inflated.p0.3.rotation_reject_rate");
    let p1 = metric(reports, exp, "zero_inflated.p1.rotation_reject_rate");
    let ok = p03 >= 0.99 && (0.01..=0.10).contains(&p0_rate) && p1 == 0.0;
    Outcome::new(ok, format!("p=0.3 reject {p03:.2}, p=0 reject {p0_rate:.3}, p=1 reject {p1:.2}"))
}

fn run_manifest(cfg: &ExperimentConfig) -> RunManifest {
    let started = Utc::now();
    let reports = experiments::run_all(cfg);
    RunManifest::new(cfg.clone(), reports, started, Utc::now())
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let mut outcomes: Vec<(&str, Outcome)> = Vec::new();

    outcomes.push(("C1 orthogonality", c1_orthogonality()));
    outcomes.push(("C2 ks oracle equivalence", c2_ks_oracle()));
    let (c3, p0_rate) = c3_null_calibration();
    outcomes.push(("C3 null calibration", c3));

    let cfg = ExperimentConfig { seed: SEED, alpha: 0.01, ..ExperimentConfig::default() };
    let first = run_manifest(&cfg);
    let second = run_manifest(&cfg);
    let reports = &first.reports;

    outcomes.push(("C4 ratio identity", c4_ratio(reports)));
    outcomes.push(("C5 slln surrogate", c5_slln(reports)));
    outcomes.push(("C6 partial-sum identity", c6_partial_sum(reports)));
    outcomes.push(("C7 functional equation", c7_functional_equation(reports)));
    outcomes.push(("C8 covariance of squares", c8_cov_squares(reports)));
    outcomes.push(("C9 zero-atom dichotomy", c9_dichotomy(reports, p0_rate)));

    let a = first.canonical_json().expect("serialize");
    let b = second.canonical_json().expect("serialize");
    outcomes.push((
        "C10 determinism",
        Outcome::new(a == b, format!("{} bytes, identical: {}", a.len(), a == b)),
    ));

    let mut failed = 0;
    for (name, o) in &outcomes {
        println!("{} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{}/{} criteria passed in {:.1}s", outcomes.len() - failed, outcomes.len(), t0.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
