//! Machine-readable verification reports: one row per check, with the
//! measured deviation, the tolerance it is held to, and a short identity tag
//! naming which relation the check exercises ("plumbing" for artifact
//! mechanics with no external identity behind them).

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub citation: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failed(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }
}

/// Accumulates check rows; rows are sorted by check name on finish so the
/// report order never depends on execution order.
pub struct Checker {
    suite: String,
    seed: u64,
    overrides: BTreeMap<String, f64>,
    rows: Vec<CheckRow>,
}

impl Checker {
    pub fn new(suite: &str, seed: u64, overrides: &BTreeMap<String, f64>) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            overrides: overrides.clone(),
            rows: Vec::new(),
        }
    }

    /// Runs one check: `measure` returns the deviation, which must stay at
    /// or below the (possibly overridden) tolerance.
    pub fn check(
        &mut self,
        name: &str,
        citation: &str,
        tolerance: f64,
        measure: impl FnOnce() -> f64,
    ) {
        let tol = self.overrides.get(name).copied().unwrap_or(tolerance);
        let start = Instant::now();
        let deviation = measure();
        let seconds = start.elapsed().as_secs_f64();
        self.rows.push(CheckRow {
            check: name.to_string(),
            citation: citation.to_string(),
            deviation,
            tolerance: tol,
            pass: deviation.is_finite() && deviation <= tol,
            seconds,
        });
    }

    /// A check that fails outright (e.g. an unexpected error); recorded with
    /// an infinite deviation.
    pub fn fail(&mut self, name: &str, citation: &str, tolerance: f64) {
        let tol = self.overrides.get(name).copied().unwrap_or(tolerance);
        self.rows.push(CheckRow {
            check: name.to_string(),
            citation: citation.to_string(),
            deviation: f64::INFINITY,
            tolerance: tol,
            pass: false,
            seconds: 0.0,
        });
    }

    pub fn finish(mut self) -> SuiteReport {
        self.rows.sort_by(|a, b| a.check.cmp(&b.check));
        SuiteReport {
            suite: self.suite,
            seed: self.seed,
            rows: self.rows,
        }
    }
}
