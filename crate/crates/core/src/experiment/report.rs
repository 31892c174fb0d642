use std::collections::BTreeMap;

use serde::Serialize;

use crate::uncertainty::{InequalityReport, Verdict};

/// Version of the JSON layout written by the runner.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
    Within,
}

/// One scalar check of a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    /// Upper limit for `at-most`, lower limit for `at-least`, and the
    /// inclusive `[lower, upper]` range for `within`.
    pub limit: Vec<f64>,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Bound::AtMost,
            limit: vec![limit],
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Bound::AtLeast,
            limit: vec![limit],
            passed: value >= limit,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Bound::Within,
            limit: vec![lower, upper],
            passed: (lower..=upper).contains(&value),
        }
    }

    /// Boolean check recorded as `1 ≥ 1` / `0 ≥ 1`.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

/// Output of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub reports: Vec<InequalityReport>,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            passed: false,
            checks: Vec::new(),
            reports: Vec::new(),
            values: BTreeMap::new(),
            error: None,
        }
    }

    pub fn failed(suite: &str, error: String) -> Self {
        Self {
            error: Some(error),
            ..Self::new(suite)
        }
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn value(&mut self, key: impl Into<String>, v: f64) -> &mut Self {
        self.values.insert(key.into(), v);
        self
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_report(&self, name: &str) -> Option<&InequalityReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    /// Pass iff every check passes and no report is outright violated.
    pub fn finish(mut self) -> Self {
        self.passed = self.error.is_none()
            && self.checks.iter().all(|c| c.passed)
            && self.reports.iter().all(|r| r.verdict.passes());
        self
    }

    /// As [`finish`](Self::finish), with inequality verdicts recorded but
    /// not gating the suite.
    pub fn finish_checks_only(mut self) -> Self {
        self.passed = self.error.is_none() && self.checks.iter().all(|c| c.passed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub passed: bool,
    pub report: String,
    pub verdicts: BTreeMap<String, Verdict>,
    pub failed_checks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Top-level record of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub passed: bool,
    pub config: crate::experiment::ExperimentConfig,
    pub suites: Vec<SuiteSummary>,
}

impl SuiteSummary {
    pub fn of(r: &SuiteReport) -> Self {
        Self {
            suite: r.suite.clone(),
            passed: r.passed,
            report: format!("{}.json", r.suite),
            verdicts: r.reports.iter().map(|x| (x.name.clone(), x.verdict)).collect(),
            failed_checks: r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect(),
            error: r.error.clone(),
        }
    }
}
