use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every suite the runner knows, in execution order.
pub const SUITES: [&str; 10] = [
    "algebra",
    "fourier",
    "admissibility",
    "plancherel",
    "calibration",
    "thm31",
    "thm32",
    "thm33",
    "lemma",
    "thm34",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveletChoice {
    CliffordHermite,
    FromFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionChoice {
    Gaussian,
    ShiftedGaussian,
    GaussianMixture,
    FromFile,
}

/// One experiment, read from a flat TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimension: usize,
    /// Half extent `L` of the sampling cube `[−L, L]ⁿ`.
    pub half_width: f64,
    /// Points per axis `N` (even).
    pub points: usize,
    #[serde(default = "default_wavelet")]
    pub wavelet: WaveletChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet_file: Option<PathBuf>,
    #[serde(default = "default_function")]
    pub function: FunctionChoice,
    /// Width of the analyzed Gaussian (and of each shifted copy).
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Centre `b₀` for `shifted-gaussian`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_file: Option<PathBuf>,
    /// Seed for mixtures and sampled frequency nodes.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Components of `gaussian-mixture`.
    #[serde(default = "default_count")]
    pub count: usize,
    pub a_min: f64,
    pub a_max: f64,
    /// Number of scales `J`.
    pub scales: usize,
    /// Number of spin samples `M`.
    pub spins: usize,
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    /// Report directory; not echoed into reports so that runs into
    /// different directories stay byte-identical.
    #[serde(default = "default_output", skip_serializing)]
    pub output: PathBuf,
    /// Relative tolerance for ratio checks.
    #[serde(default = "default_relative_tolerance")]
    pub relative_tolerance: f64,
    /// Relative tolerance of the spectral-vs-direct oracle.
    #[serde(default = "default_oracle_tolerance")]
    pub oracle_tolerance: f64,
    #[serde(default = "default_calibration_nodes")]
    pub calibration_nodes: usize,
}

fn default_wavelet() -> WaveletChoice {
    WaveletChoice::CliffordHermite
}
fn default_function() -> FunctionChoice {
    FunctionChoice::Gaussian
}
fn default_sigma() -> f64 {
    0.35
}
fn default_seed() -> u64 {
    7
}
fn default_count() -> usize {
    3
}
fn default_suites() -> Vec<String> {
    SUITES.iter().map(|s| s.to_string()).collect()
}
fn default_output() -> PathBuf {
    PathBuf::from("clifwave-out")
}
fn default_relative_tolerance() -> f64 {
    0.02
}
fn default_oracle_tolerance() -> f64 {
    1e-6
}
fn default_calibration_nodes() -> usize {
    20
}

impl ExperimentConfig {
    /// Parse and validate. Relative file paths are resolved against `base`.
    pub fn from_toml_str(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.contains('`'))
                .unwrap_or("config")
                .to_string();
            Error::Config { field, message: msg }
        })?;
        for p in [&mut cfg.wavelet_file, &mut cfg.function_file].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dimension) {
            return Err(Error::config("dimension", format!("must be 1, 2 or 3, got {}", self.dimension)));
        }
        if self.points < 2 || self.points % 2 == 1 {
            return Err(Error::config("points", format!("must be even and at least 2, got {}", self.points)));
        }
        positive("half_width", self.half_width)?;
        positive("sigma", self.sigma)?;
        positive("a_min", self.a_min)?;
        positive("a_max", self.a_max)?;
        positive("relative_tolerance", self.relative_tolerance)?;
        positive("oracle_tolerance", self.oracle_tolerance)?;
        if self.a_min >= self.a_max {
            return Err(Error::config("a_max", "must exceed a_min"));
        }
        for (field, v) in [
            ("scales", self.scales),
            ("spins", self.spins),
            ("count", self.count),
            ("calibration_nodes", self.calibration_nodes),
        ] {
            if v == 0 {
                return Err(Error::config(field, "must be positive"));
            }
        }
        if self.suites.is_empty() {
            return Err(Error::config("suites", "must name at least one suite"));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::config(
                    "suites",
                    format!("unknown suite `{s}` (known: {})", SUITES.join(", ")),
                ));
            }
        }
        if self.wavelet == WaveletChoice::FromFile && self.wavelet_file.is_none() {
            return Err(Error::config("wavelet_file", "required when wavelet = \"from-file\""));
        }
        match self.function {
            FunctionChoice::FromFile if self.function_file.is_none() => {
                return Err(Error::config("function_file", "required when function = \"from-file\""));
            }
            FunctionChoice::ShiftedGaussian => match &self.shift {
                None => return Err(Error::config("shift", "required when function = \"shifted-gaussian\"")),
                Some(b) if b.len() != self.dimension || b.iter().any(|v| !v.is_finite()) => {
                    return Err(Error::config("shift", format!("must hold {} finite values", self.dimension)));
                }
                _ => {}
            },
            _ => {}
        }
        Ok(())
    }

    /// Replace the suite list; names are validated.
    pub fn with_suites(mut self, suites: Vec<String>) -> Result<Self> {
        self.suites = suites;
        self.validate()?;
        Ok(self)
    }

    /// Suites to run, in canonical order without duplicates.
    pub fn selected_suites(&self) -> Vec<&'static str> {
        SUITES
            .iter()
            .copied()
            .filter(|s| self.suites.iter().any(|t| t == s))
            .collect()
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "dimension = 2\nhalf_width = 8.0\npoints = 64\na_min = 0.015625\na_max = 8.0\nscales = 16\nspins = 8\n";

    fn field_of(text: &str) -> String {
        match ExperimentConfig::from_toml_str(text, Path::new(".")) {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults() {
        let c = ExperimentConfig::from_toml_str(MINIMAL, Path::new("/tmp")).unwrap();
        assert_eq!(c.selected_suites().len(), 10);
        assert_eq!(c.function, FunctionChoice::Gaussian);
        assert_eq!(c.output, PathBuf::from("/tmp/clifwave-out"));
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field_of(&MINIMAL.replace("points = 64", "points = 63")), "points");
        assert_eq!(field_of(&MINIMAL.replace("dimension = 2", "dimension = 4")), "dimension");
        assert_eq!(field_of(&format!("{MINIMAL}suites = [\"thm99\"]\n")), "suites");
        assert_eq!(field_of(&format!("{MINIMAL}colour = 3\n")), "colour");
        assert_eq!(field_of(&MINIMAL.replace("a_min = 0.015625", "a_min = 9.0")), "a_max");
        assert_eq!(field_of(&format!("{MINIMAL}function = \"shifted-gaussian\"\n")), "shift");
        assert_eq!(field_of(&MINIMAL.replace("spins = 8", "spins = 0")), "spins");
    }

    #[test]
    fn suite_order_is_canonical() {
        let c = ExperimentConfig::from_toml_str(&format!("{MINIMAL}suites = [\"thm34\", \"algebra\", \"thm34\"]\n"), Path::new("."))
            .unwrap();
        assert_eq!(c.selected_suites(), vec!["algebra", "thm34"]);
    }
}
