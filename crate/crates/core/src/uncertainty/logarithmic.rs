use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use crate::error::Result;
use crate::fourier::{cft, icft};
use crate::grid::{log_radius_integral, CliffordField};
use crate::uncertainty::slices::weighted_slice_sum;
use crate::uncertainty::{digamma, log_moment, Diagnostics, InequalityReport, Verdict, TAIL_THRESHOLD};
use crate::wavelet::{CwtParams, MotherWavelet, SpectralCwt};

/// Padding of the translation lattice for `b`-weighted coefficient moments:
/// wide enough that the largest default scale keeps its energy away from
/// the periodic seam.
pub const MOMENT_PADDING: usize = 4;

/// Same extent, twice the points, by zero-padding the spectrum.
pub fn refine_by_interpolation(f: &CliffordField) -> CliffordField {
    icft(&cft(f).pad(2))
}

/// `φ(n/4) + ln 2`.
pub fn log_constant(n: usize) -> Result<f64> {
    Ok(digamma(n as f64 / 4.0)? + LN_2)
}

fn log_fourier_sides(f: &CliffordField) -> Result<(f64, f64, f64, f64)> {
    let space = log_moment(f);
    let freq = log_moment(&cft(f));
    let rhs = log_constant(f.dim())? * f.l2_norm_sqr();
    Ok((space, freq, space + freq, rhs))
}

/// `∫ ln|x| |f|² + ∫ ln|ξ| |f̂|² ≥ (φ(n/4) + ln 2) ‖f‖₂²`.
///
/// The refinement delta is the larger margin change under doubling the
/// spatial resolution (spectral interpolation) and doubling the spectral
/// resolution (zero-padding).
pub fn log_fourier_up(f: &CliffordField) -> Result<InequalityReport> {
    let (space, freq, lhs, rhs) = log_fourier_sides(f)?;
    let margin = lhs - rhs;
    let (_, _, l_s, r_s) = log_fourier_sides(&refine_by_interpolation(f))?;
    let (_, _, l_p, r_p) = log_fourier_sides(&f.pad(2))?;
    let delta = ((l_s - r_s) - margin).abs().max(((l_p - r_p) - margin).abs());
    let tail = f.tail_mass().max(cft(f).tail_mass());
    let mut values = BTreeMap::new();
    values.insert("space_log_moment".into(), space);
    values.insert("frequency_log_moment".into(), freq);
    values.insert("norm_sqr".into(), f.l2_norm_sqr());
    values.insert("margin_refined_space".into(), l_s - r_s);
    values.insert("margin_refined_frequency".into(), l_p - r_p);
    Ok(InequalityReport::new(
        "log-fourier-uncertainty",
        lhs,
        rhs,
        Diagnostics {
            tail_mass: tail,
            refinement_delta: delta,
            unreliable_quadrature: tail > TAIL_THRESHOLD,
            values,
            ..Default::default()
        },
    ))
}

/// Which constant reproduces the frequency log-moment identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogConstant {
    /// `A_ψ / (2π)ⁿ`, the constant as stated.
    Stated,
    /// `A_ψ`.
    Admissibility,
}

impl LogConstant {
    pub fn key(&self) -> &'static str {
        match self {
            LogConstant::Stated => "a_psi_over_2pi_n",
            LogConstant::Admissibility => "a_psi",
        }
    }

    pub fn value(&self, a_psi: f64, n: usize) -> f64 {
        match self {
            LogConstant::Stated => a_psi / (2.0 * PI).powi(n as i32),
            LogConstant::Admissibility => a_psi,
        }
    }
}

/// Measured sides of
/// `∫∫∫ ln|ξ| |T̂(a,ξ,s)|² dV(ξ) da/a^{n+1} ds = C ∫ ln|ξ| |f̂|² dV(ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogIdentity {
    pub lhs: f64,
    /// `∫ ln|ξ| |f̂|² dV(ξ)`.
    pub base: f64,
    pub ratio_stated: f64,
    pub ratio_admissibility: f64,
    /// The unique candidate with ratio within the tolerance, if any.
    pub selected: Option<LogConstant>,
    pub tail_mass: f64,
}

/// Evaluate both sides on a `padding`-times finer frequency lattice.
pub fn log_identity_sides(
    f: &CliffordField,
    psi: &dyn MotherWavelet,
    params: &CwtParams,
    a_psi: f64,
    padding: usize,
    tolerance: f64,
) -> Result<LogIdentity> {
    let engine = SpectralCwt::new(f, psi, params, padding)?;
    let fg = engine.frequency_grid();
    let (lhs, tail_mass) = weighted_slice_sum(
        &engine,
        &fg,
        |j, m| engine.spectrum(j, m),
        |d| log_radius_integral(&fg, d),
    );
    let base = log_radius_integral(&fg, &engine.input_spectrum().module_sqr_density());
    let n = f.dim();
    let ratio_stated = lhs / (LogConstant::Stated.value(a_psi, n) * base);
    let ratio_admissibility = lhs / (LogConstant::Admissibility.value(a_psi, n) * base);
    let hit = |r: f64| (r - 1.0).abs() <= tolerance;
    let selected = match (hit(ratio_stated), hit(ratio_admissibility)) {
        (true, false) => Some(LogConstant::Stated),
        (false, true) => Some(LogConstant::Admissibility),
        _ => None,
    };
    Ok(LogIdentity {
        lhs,
        base,
        ratio_stated,
        ratio_admissibility,
        selected,
        tail_mass,
    })
}

/// Outcome of [`log_moment_identity`].
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub report: InequalityReport,
    pub base: LogIdentity,
    pub finer_frequency: LogIdentity,
    pub finer_scales: LogIdentity,
}

impl LemmaReport {
    /// The constant selected on every lattice, if the selection is unique
    /// and stable.
    pub fn stable_selection(&self) -> Option<LogConstant> {
        let s = self.base.selected?;
        (self.finer_frequency.selected == Some(s) && self.finer_scales.selected == Some(s)).then_some(s)
    }
}

/// The frequency log-moment identity with both candidate constants, checked
/// again on a finer frequency lattice and with a halved scale step.
pub fn log_moment_identity(
    f: &CliffordField,
    psi: &dyn MotherWavelet,
    params: &CwtParams,
    a_psi: f64,
    tolerance: f64,
) -> Result<LemmaReport> {
    let base = log_identity_sides(f, psi, params, a_psi, 2, tolerance)?;
    let finer = log_identity_sides(f, psi, params, a_psi, 4, tolerance)?;
    let refined_params = params.refined_scales()?;
    let scale_refined = log_identity_sides(f, psi, &refined_params, a_psi, 2, tolerance)?;
    let n = f.dim();
    let chosen = base.selected.unwrap_or(LogConstant::Stated);
    let rhs = chosen.value(a_psi, n) * base.base;
    let delta = (finer.lhs - base.lhs).abs().max((scale_refined.lhs - base.lhs).abs());
    let mut ratios = BTreeMap::new();
    ratios.insert(LogConstant::Stated.key().into(), base.ratio_stated);
    ratios.insert(LogConstant::Admissibility.key().into(), base.ratio_admissibility);
    let mut values = BTreeMap::new();
    values.insert("frequency_log_moment".into(), base.base);
    values.insert("ratio_a_psi_refined_frequency".into(), finer.ratio_admissibility);
    values.insert("ratio_a_psi_over_2pi_n_refined_frequency".into(), finer.ratio_stated);
    values.insert("ratio_a_psi_refined_scales".into(), scale_refined.ratio_admissibility);
    values.insert("ratio_a_psi_over_2pi_n_refined_scales".into(), scale_refined.ratio_stated);
    values.insert(
        "selected_is_a_psi".into(),
        match base.selected {
            Some(LogConstant::Admissibility) => 1.0,
            Some(LogConstant::Stated) => 0.0,
            None => f64::NAN,
        },
    );
    let mut report = InequalityReport::new(
        "log-moment-identity",
        base.lhs,
        rhs,
        Diagnostics {
            tail_mass: base.tail_mass,
            refinement_delta: delta,
            constant_ratios: ratios,
            unreliable_quadrature: base.tail_mass > TAIL_THRESHOLD,
            values: values.into_iter().filter(|(_, v): &(String, f64)| v.is_finite()).collect(),
        },
    );
    // An identity, judged by which constant reproduces it rather than by sign.
    report.verdict = match base.selected {
        Some(_) => Verdict::Holds,
        None => Verdict::ConstantMismatch,
    };
    Ok(LemmaReport {
        report,
        base,
        finer_frequency: finer,
        finer_scales: scale_refined,
    })
}

/// `∫∫∫ ln|b| |T|² dV(b) dμ' + C ∫ ln|ξ| |f̂|² ≥ (φ(n/4) + ln 2) A_ψ ‖f‖₂²`,
/// evaluated with the stated `C = A_ψ/(2π)ⁿ` and with `companion`.
pub fn log_cwt_up(
    f: &CliffordField,
    psi: &dyn MotherWavelet,
    params: &CwtParams,
    a_psi: f64,
    companion: LogConstant,
) -> Result<InequalityReport> {
    let n = f.dim();
    let sides = log_cwt_sides(f, psi, params)?;
    let refined = log_cwt_sides(f, psi, &params.refined_scales()?)?;
    let rhs = log_constant(n)? * a_psi * f.l2_norm_sqr();
    let c_stated = LogConstant::Stated.value(a_psi, n);
    let c_comp = companion.value(a_psi, n);
    let lhs = sides.b_moment + c_stated * sides.xi_moment;
    let lhs_comp = sides.b_moment + c_comp * sides.xi_moment;
    let delta = (refined.b_moment - sides.b_moment).abs()
        + c_comp.max(c_stated) * (refined.xi_moment - sides.xi_moment).abs();
    let tail = sides.tail_mass.max(f.tail_mass());
    let mut values = BTreeMap::new();
    values.insert("b_log_moment".into(), sides.b_moment);
    values.insert("xi_log_moment".into(), sides.xi_moment);
    values.insert("stated_constant".into(), c_stated);
    values.insert("companion_constant".into(), c_comp);
    values.insert("companion_lhs".into(), lhs_comp);
    values.insert("companion_margin".into(), lhs_comp - rhs);
    let mut ratios = BTreeMap::new();
    ratios.insert("companion_over_stated".into(), c_comp / c_stated);
    let mut report = InequalityReport::new(
        "log-wavelet-uncertainty",
        lhs,
        rhs,
        Diagnostics {
            tail_mass: tail,
            refinement_delta: delta,
            constant_ratios: ratios,
            unreliable_quadrature: tail > TAIL_THRESHOLD,
            values,
        },
    );
    let comp = Verdict::from_margin(lhs_comp - rhs, report.tolerance);
    report.verdict = Verdict::with_companion(report.verdict, comp);
    Ok(report)
}

/// The two integrals entering the logarithmic wavelet inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCwtSides {
    /// `∫∫∫ ln|b| |T|² dV(b) dμ'`.
    pub b_moment: f64,
    /// `∫ ln|ξ| |f̂|² dV(ξ)`.
    pub xi_moment: f64,
    pub tail_mass: f64,
}

/// Evaluate [`LogCwtSides`] on the [`MOMENT_PADDING`]-padded lattice.
pub fn log_cwt_sides(f: &CliffordField, psi: &dyn MotherWavelet, params: &CwtParams) -> Result<LogCwtSides> {
    let engine = SpectralCwt::new(f, psi, params, MOMENT_PADDING)?;
    let tg = *engine.translation_grid();
    let (b_moment, tail_mass) = weighted_slice_sum(
        &engine,
        &tg,
        |j, m| engine.coefficients(j, m),
        |d| log_radius_integral(&tg, d),
    );
    let fg = engine.frequency_grid();
    let xi_moment = log_radius_integral(&fg, &engine.input_spectrum().module_sqr_density());
    Ok(LogCwtSides {
        b_moment,
        xi_moment,
        tail_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;
    use crate::grid::GridSpec;
    use crate::wavelet::CliffordHermite;

    fn dilated_gaussian(grid: GridSpec, c: f64) -> CliffordField {
        let n = grid.dim();
        CliffordField::sample(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (c * c);
            Multivector::scalar(n, c.powf(-(n as f64) / 2.0) * (-0.5 * r2).exp())
        })
        .unwrap()
    }

    #[test]
    fn gaussian_margin_is_pi_ln_2_for_every_dilation() {
        let grid = GridSpec::centered(2, 16.0, 128).unwrap();
        let target = PI * LN_2;
        for c in [0.5, 1.0, 2.0] {
            let r = log_fourier_up(&dilated_gaussian(grid, c)).unwrap();
            assert!((r.margin - target).abs() < 0.02 * target, "c={c}: {}", r.margin);
            assert_eq!(r.verdict, Verdict::Holds);
            assert!(!r.diagnostics.unreliable_quadrature);
            assert!(r.diagnostics.refinement_delta < r.tolerance);
        }
    }

    #[test]
    fn gaussian_margin_in_other_dimensions() {
        // Gaussian margin: ‖f‖² [φ(n/2) − φ(n/4) − ln 2] with ‖f‖² = π^{n/2}.
        for (n, points) in [(1usize, 128usize), (3, 48)] {
            let grid = GridSpec::centered(n, 8.0, points).unwrap();
            let f = dilated_gaussian(grid, 1.0);
            let r = log_fourier_up(&f).unwrap();
            let expect = PI.powf(n as f64 / 2.0)
                * (digamma(n as f64 / 2.0).unwrap() - digamma(n as f64 / 4.0).unwrap() - LN_2);
            assert!((r.margin - expect).abs() < 0.02 * expect.abs(), "n={n}: {} vs {expect}", r.margin);
        }
    }

    #[test]
    fn zero_input() {
        let grid = GridSpec::centered(2, 4.0, 16).unwrap();
        let r = log_fourier_up(&CliffordField::zeros(grid, crate::grid::Domain::Space)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.margin), (0.0, 0.0, 0.0));
        let ch = CliffordHermite::new(2).unwrap();
        let params = CwtParams::geometric(2, 0.5, 2.0, 3, 2).unwrap();
        let r = log_cwt_up(
            &CliffordField::zeros(grid, crate::grid::Domain::Space),
            &ch,
            &params,
            ch.admissibility_constant().unwrap(),
            LogConstant::Admissibility,
        )
        .unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn identity_selects_one_constant() {
        let grid = GridSpec::centered(2, 8.0, 64).unwrap();
        let f = dilated_gaussian(grid, 0.5);
        let ch = CliffordHermite::new(2).unwrap();
        let a = ch.admissibility_constant().unwrap();
        let params = CwtParams::geometric(2, 2f64.powi(-6), 8.0, 16, 2).unwrap();
        let s = log_identity_sides(&f, &ch, &params, a, 2, 0.02).unwrap();
        assert_eq!(s.selected, Some(LogConstant::Admissibility), "{s:?}");
        let sc = log_identity_sides(&f.scale(2.5), &ch, &params, a, 2, 0.02).unwrap();
        assert!((sc.ratio_admissibility - s.ratio_admissibility).abs() < 1e-12);
    }
}
