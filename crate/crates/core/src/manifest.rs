//! Run manifests (JSON) and plot data (CSV).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::experiments::ExperimentReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub reports: Vec<ExperimentReport>,
    pub started: String,
    pub finished: String,
}

fn iso(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new(
        config: ExperimentConfig,
        reports: Vec<ExperimentReport>,
        started: DateTime<Utc>,
        finished: DateTime<Utc>,
    ) -> Self {
        Self { version: TOOL_VERSION.to_string(), config, reports, started: iso(started), finished: iso(finished) }
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(ExperimentReport::passed)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// JSON with wall-clock fields (timestamps, per-report runtimes) blanked,
    /// for byte-level comparison of runs.
    pub fn canonical_json(&self) -> serde_json::Result<String> {
        let mut m = self.clone();
        m.started.clear();
        m.finished.clear();
        for r in &mut m.reports {
            r.runtime_ms = 0;
        }
        m.to_json()
    }
}

/// Writes `<dir>/<experiment>__<series>.csv` for every series of every
/// report, with header `x,y`. Non-finite points are dropped.
pub fn write_plot_csvs(dir: &Path, reports: &[ExperimentReport]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for report in reports {
        for (series, points) in &report.series {
            let path = dir.join(format!("{}__{}.csv", report.name, series));
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path)?;
            w.write_record(["x", "y"])?;
            for &(x, y) in points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                w.write_record([x.to_string(), y.to_string()])?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{Bound, Verdict};
    use std::collections::BTreeMap;

    fn report() -> ExperimentReport {
        let mut r = ExperimentReport::errored("demo", &ExperimentConfig::default(), "x".into());
        r.error = None;
        r.verdict = Verdict::Pass;
        r.metrics.insert("a".into(), 0.1 + 0.2);
        r.criteria.push(crate::experiments::Criterion {
            name: "a".into(),
            value: 0.1 + 0.2,
            bound: Bound::Between(-1.0, 1.0),
            holds: true,
        });
        r.tests.insert("t".into(), crate::stats::TestResult::new(0.01, 0.3, 0.05, 10, 12));
        r.runtime_ms = 17;
        let mut series = BTreeMap::new();
        series.insert("curve".to_string(), vec![(0.0, 1.0), (f64::NAN, 2.0), (1.5, -0.25)]);
        r.series = series;
        r
    }

    #[test]
    fn json_round_trip() {
        let m = RunManifest::new(ExperimentConfig::default(), vec![report()], Utc::now(), Utc::now());
        let json = m.to_json().unwrap();
        let back = RunManifest::from_json(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["version", "config", "reports"] {
            assert!(value.get(key).is_some(), "{key}");
        }
        let rep = &value["reports"][0];
        for key in ["name", "metrics", "tests", "verdict", "runtime_ms"] {
            assert!(rep.get(key).is_some(), "{key}");
        }
        assert_eq!(rep["verdict"], "pass");
        for key in ["statistic", "p_value", "alpha", "reject"] {
            assert!(rep["tests"]["t"].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn canonical_json_ignores_wall_clock() {
        let a = RunManifest::new(ExperimentConfig::default(), vec![report()], Utc::now(), Utc::now());
        let mut b = a.clone();
        b.started = "2000-01-01T00:00:00.000Z".into();
        b.reports[0].runtime_ms = 99;
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    }

    #[test]
    fn csv_files_have_header_and_finite_rows() {
        let dir = tempfile::tempdir().unwrap();
        let files = write_plot_csvs(dir.path(), &[report()]).unwrap();
        assert_eq!(files.len(), 1);
        let text = fs::read_to_string(&files[0]).unwrap();
        assert_eq!(text, "x,y\n0,1\n1.5,-0.25\n");
    }
}
