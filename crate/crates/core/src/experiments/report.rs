use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::stats::{binomial_band, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Expected region for a metric. `Between` is an open interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Between(f64, f64),
}

impl Bound {
    pub fn holds(&self, value: f64) -> bool {
        match *self {
            Bound::AtMost(hi) => value <= hi,
            Bound::AtLeast(lo) => value >= lo,
            Bound::Between(lo, hi) => value > lo && value < hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub holds: bool,
}

pub type Series = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub config: ExperimentConfig,
    pub metrics: BTreeMap<String, f64>,
    pub tests: BTreeMap<String, TestResult>,
    pub criteria: Vec<Criterion>,
    pub verdict: Verdict,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Plot data; written as CSV, not part of the JSON report.
    #[serde(skip)]
    pub series: BTreeMap<String, Series>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    /// Report for an experiment that could not run.
    pub fn errored(name: &str, cfg: &ExperimentConfig, message: String) -> Self {
        Self {
            name: name.to_string(),
            config: cfg.clone(),
            metrics: BTreeMap::new(),
            tests: BTreeMap::new(),
            criteria: Vec::new(),
            verdict: Verdict::Fail,
            runtime_ms: 0,
            error: Some(message),
            series: BTreeMap::new(),
        }
    }
}

/// Accumulates metrics and criteria; the verdict is the conjunction of all
/// criteria, so expected-failure controls must be phrased as criteria on the
/// expected side (e.g. "rejection rate at least 0.99").
pub(crate) struct ReportBuilder {
    name: String,
    config: ExperimentConfig,
    metrics: BTreeMap<String, f64>,
    tests: BTreeMap<String, TestResult>,
    criteria: Vec<Criterion>,
    series: BTreeMap<String, Series>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(name: &str, cfg: &ExperimentConfig) -> Self {
        Self {
            name: name.to_string(),
            config: cfg.clone(),
            metrics: BTreeMap::new(),
            tests: BTreeMap::new(),
            criteria: Vec::new(),
            series: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn test(&mut self, name: impl Into<String>, result: TestResult) {
        self.tests.insert(name.into(), result);
    }

    /// Records `value` as a metric and checks it against `bound`.
    pub fn check(&mut self, name: impl Into<String>, value: f64, bound: Bound) {
        let name = name.into();
        self.metrics.insert(name.clone(), value);
        self.criteria.push(Criterion { name, value, holds: bound.holds(value), bound });
    }

    /// Rejection rate of a true null: must not exceed the upper end of the
    /// exact binomial 99% band around `alpha`.
    pub fn check_null_rate(&mut self, name: impl Into<String>, rate: f64) {
        let (_, hi) = binomial_band(self.config.alpha, self.config.replications, 0.99);
        self.check(name, rate, Bound::AtMost(hi));
    }

    /// Rejection rate of a false null: at least `power_min`.
    pub fn check_power(&mut self, name: impl Into<String>, rate: f64) {
        let lo = self.config.tol("power_min");
        self.check(name, rate, Bound::AtLeast(lo));
    }

    pub fn series(&mut self, name: impl Into<String>, points: Series) {
        self.series.insert(name.into(), points);
    }

    pub fn finish(self) -> ExperimentReport {
        let verdict = if self.criteria.iter().all(|c| c.holds) { Verdict::Pass } else { Verdict::Fail };
        ExperimentReport {
            name: self.name,
            config: self.config,
            metrics: self.metrics,
            tests: self.tests,
            criteria: self.criteria,
            verdict,
            runtime_ms: self.started.elapsed().as_millis() as u64,
            error: None,
            series: self.series,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!(Bound::AtMost(1.0).holds(1.0));
        assert!(!Bound::AtMost(1.0).holds(1.01));
        assert!(Bound::AtLeast(0.99).holds(0.99));
        assert!(Bound::Between(-1.05, -0.95).holds(-1.0));
        assert!(!Bound::Between(-1.05, -0.95).holds(-0.95));
    }

    #[test]
    fn verdict_is_conjunction() {
        let cfg = ExperimentConfig::default();
        let mut b = ReportBuilder::new("x", &cfg);
        b.check("ok", 0.5, Bound::AtMost(1.0));
        assert!(b.finish().passed());

        let mut b = ReportBuilder::new("x", &cfg);
        b.check("ok", 0.5, Bound::AtMost(1.0));
        b.check("bad", 2.0, Bound::AtMost(1.0));
        let r = b.finish();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.criterion("bad").unwrap().holds);
        assert_eq!(r.metric("ok"), Some(0.5));
    }

    #[test]
    fn null_band_follows_alpha() {
        let cfg = ExperimentConfig { alpha: 0.5, ..ExperimentConfig::default() };
        let mut b = ReportBuilder::new("x", &cfg);
        b.check_null_rate("rate", 0.55);
        assert!(b.finish().passed());
    }
}
