use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome of comparing a measured left side with a right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    HoldsWithinTolerance,
    Violated,
    /// The stated constant fails but the companion constant holds.
    ConstantMismatch,
}

impl Verdict {
    /// Verdict of `margin` against `−tolerance`.
    pub fn from_margin(margin: f64, tolerance: f64) -> Self {
        if margin >= 0.0 {
            Verdict::Holds
        } else if margin >= -tolerance {
            Verdict::HoldsWithinTolerance
        } else {
            Verdict::Violated
        }
    }

    /// Stated-constant verdict, downgraded to `ConstantMismatch` when only
    /// the companion constant holds.
    pub fn with_companion(stated: Verdict, companion: Verdict) -> Self {
        match (stated, companion) {
            (Verdict::Violated, Verdict::Holds | Verdict::HoldsWithinTolerance) => Verdict::ConstantMismatch,
            (v, _) => v,
        }
    }

    pub fn passes(&self) -> bool {
        !matches!(self, Verdict::Violated)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinTolerance => "holds-within-tolerance",
            Verdict::Violated => "violated",
            Verdict::ConstantMismatch => "constant-mismatch",
        }
    }
}

/// Boundary energy above which a report is flagged as unreliable.
pub const TAIL_THRESHOLD: f64 = 1e-6;

/// Relative part of every inequality tolerance.
pub const RELATIVE_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Fraction of energy on the outermost node layer.
    pub tail_mass: f64,
    /// Change of the margin under the refinement named in `values`.
    pub refinement_delta: f64,
    pub constant_ratios: BTreeMap<String, f64>,
    pub unreliable_quadrature: bool,
    /// Further named quantities (companion sides, auxiliary norms, ...).
    pub values: BTreeMap<String, f64>,
}

/// One side-by-side evaluation of an inequality or identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

impl InequalityReport {
    /// Build a report; tolerance is `max(2%·|rhs|, refinement_delta)`.
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, diagnostics: Diagnostics) -> Self {
        let margin = lhs - rhs;
        let tolerance = (RELATIVE_TOLERANCE * rhs.abs()).max(diagnostics.refinement_delta);
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            verdict: Verdict::from_margin(margin, tolerance),
            diagnostics,
        }
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.diagnostics.values.get(key).copied()
    }
}
