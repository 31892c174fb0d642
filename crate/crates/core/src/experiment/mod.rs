//! Configured experiment runs: suites, JSON reports and coefficient export.

mod config;
mod export;
mod report;
mod suites;

use std::path::Path;
use std::time::{Duration, Instant};

pub use config::{ExperimentConfig, FunctionChoice, WaveletChoice, SUITES};
pub use export::{export_cwt, ExportManifest, SliceEntry};
pub use report::{Bound, Check, RunSummary, SuiteReport, SuiteSummary, SCHEMA_VERSION};
pub use suites::{
    algebra, analyzed_function, gaussian_log_margin, gaussian_mixture, run_suite, Context, DILATIONS,
    FD_ORDER_RANGE, MARGIN_STABILITY, MIXTURE_SWEEP, STABILITY_TOLERANCE,
};

use crate::error::Result;

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Run the selected suites, writing `<suite>.json` and `summary.json` into
/// `out`. `progress` sees each report as it completes. A suite that errors
/// is recorded as failed and the run continues.
pub fn run(
    config: &ExperimentConfig,
    out: &Path,
    mut progress: impl FnMut(&SuiteReport, Duration),
) -> Result<RunSummary> {
    std::fs::create_dir_all(out)?;
    let ctx = Context::new(config)?;
    let mut suites = Vec::new();
    for name in config.selected_suites() {
        let start = Instant::now();
        let report = run_suite(name, &ctx).unwrap_or_else(|e| SuiteReport::failed(name, e.to_string()));
        std::fs::write(out.join(format!("{name}.json")), to_json(&report)?)?;
        progress(&report, start.elapsed());
        suites.push(SuiteSummary::of(&report));
    }
    let summary = RunSummary {
        schema_version: SCHEMA_VERSION,
        passed: suites.iter().all(|s| s.passed),
        config: config.clone(),
        suites,
    };
    std::fs::write(out.join("summary.json"), to_json(&summary)?)?;
    Ok(summary)
}
