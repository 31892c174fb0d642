//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs the reference experiment twice and checks the suite reports, plus
//! the oracle-equivalence and homogeneity evaluations that are not part of
//! a suite. Exits nonzero if a criterion outside `KNOWN_FAILURES` fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clifwave::experiment::{run, Context, ExperimentConfig, SuiteReport};
use clifwave::grid::{CliffordField, Domain, GridSpec};
use clifwave::uncertainty::{heisenberg_thm31_all, Verdict};
use clifwave::wavelet::{oracle_check, CliffordHermite, CwtParams, GaussianDerivative, MotherWavelet};

/// Criteria whose failure is a measured property of the stated inequality,
/// not of the implementation: the stated constant of the first Heisenberg
/// inequality exceeds the evaluated left side (the companion bound holds).
const KNOWN_FAILURES: [u32; 1] = [10];

struct Outcome {
    id: u32,
    passed: bool,
    detail: String,
}

fn reference_config() -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml");
    ExperimentConfig::load(&path).expect("reference config")
}

fn run_reference(cfg: &ExperimentConfig, out: &Path) -> (bool, Duration, BTreeMap<String, (SuiteReport, Duration)>) {
    let mut reports = BTreeMap::new();
    let start = Instant::now();
    let summary = run(cfg, out, |r, d| {
        reports.insert(r.suite.clone(), (r.clone(), d));
    })
    .expect("reference run");
    (summary.passed, start.elapsed(), reports)
}

fn check_passed(r: &SuiteReport, name: &str) -> bool {
    r.find_check(name).map_or(false, |c| c.passed)
}

fn random_field(grid: GridSpec, seed: u64) -> CliffordField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = (1 << grid.dim()) * grid.node_count();
    let data = (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    CliffordField::from_components(grid, Domain::Space, data).unwrap()
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p: PathBuf = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

fn main() {
    let cfg = reference_config();
    let tmp = tempfile::tempdir().unwrap();
    let (passed1, wall1, reports) = run_reference(&cfg, &tmp.path().join("first"));
    let (passed2, wall2, _) = run_reference(&cfg, &tmp.path().join("second"));
    let suite = |name: &str| &reports[name].0;
    let elapsed = |name: &str| reports[name].1;
    let mut out = Vec::new();

    // 1
    let r = suite("algebra");
    out.push(Outcome {
        id: 1,
        passed: r.passed && elapsed("algebra") < Duration::from_secs(1),
        detail: format!("algebra suite passed={} in {:?}", r.passed, elapsed("algebra")),
    });

    // 2
    let r = suite("fourier");
    out.push(Outcome {
        id: 2,
        passed: r.passed && elapsed("fourier") < Duration::from_secs(1),
        detail: format!(
            "fixed point {:.2e}, round trip {:.2e}, Parseval {:.2e} in {:?}",
            r.find_check("gaussian-fixed-point-relative-error").unwrap().value,
            r.find_check("round-trip-relative-error").unwrap().value,
            r.find_check("parseval-relative-error").unwrap().value,
            elapsed("fourier")
        ),
    });

    // 3
    let r = suite("admissibility");
    out.push(Outcome {
        id: 3,
        passed: r.passed,
        detail: format!(
            "A_psi {:.6} vs {:.6}, scalarity {:.2e}, Gaussian rejected {}",
            r.values["a_psi"],
            r.values["a_psi_closed_form"],
            r.find_check("scalarity-defect").unwrap().value,
            check_passed(r, "gaussian-rejected-as-divergent")
        ),
    });

    // 4
    let start = Instant::now();
    let one = oracle_check(
        &random_field(GridSpec::centered(1, 6.0, 16).unwrap(), 11),
        &CliffordHermite::new(1).unwrap(),
        &CwtParams::geometric(1, 1.4, 2.0, 3, 2).unwrap(),
        cfg.oracle_tolerance,
    );
    let two = oracle_check(
        &random_field(GridSpec::centered(2, 6.0, 16).unwrap(), 12),
        &GaussianDerivative::new(2, 1).unwrap(),
        &CwtParams::geometric(2, 1.4, 2.0, 3, 4).unwrap(),
        cfg.oracle_tolerance,
    );
    let oracle_time = start.elapsed();
    out.push(Outcome {
        id: 4,
        passed: one.is_ok() && two.is_ok() && oracle_time < Duration::from_secs(10),
        detail: format!("n=1 {one:?}, n=2 {two:?} in {oracle_time:?}"),
    });

    // 5
    let r = suite("plancherel");
    out.push(Outcome {
        id: 5,
        passed: r.passed,
        detail: format!(
            "ratio {:.5}, halved-step ratio {:.5}",
            r.values["ratio"], r.values["ratio_refined_scales"]
        ),
    });

    // 6
    let r = suite("calibration");
    out.push(Outcome {
        id: 6,
        passed: r.passed,
        detail: format!(
            "{} nodes, worst deviation {:.2e}, unit-mass deviation from 1/mass {:.2e}",
            r.values["nodes"],
            r.find_check("worst-ratio-deviation").unwrap().value,
            r.find_check("unit-mass-ratio-deviation-from-inverse-mass").unwrap().value
        ),
    });

    // 7
    let r = suite("thm33");
    let family: Vec<_> = r.reports.iter().filter(|x| x.name.starts_with("dilated-gaussian")).collect();
    let ok7 = family.len() == 3
        && r.checks
            .iter()
            .filter(|c| c.name.starts_with("dilated-gaussian") || c.name == "dilation-spread-relative")
            .all(|c| c.passed);
    out.push(Outcome {
        id: 7,
        passed: ok7,
        detail: format!(
            "margins {:?} vs {:.5}",
            family.iter().map(|x| x.margin).collect::<Vec<_>>(),
            r.values["gaussian_margin_closed_form"]
        ),
    });

    // 8
    let r = suite("lemma");
    out.push(Outcome {
        id: 8,
        passed: r.passed,
        detail: format!(
            "ratios with A_psi: {:.5} / finer frequency {:.5} / halved step {:.5}; with A_psi/(2pi)^n: {:.3}",
            r.values["base_ratio_a_psi"],
            r.values["finer_frequency_ratio_a_psi"],
            r.values["finer_scales_ratio_a_psi"],
            r.values["base_ratio_a_psi_over_2pi_n"]
        ),
    });

    // 9
    let r = suite("thm34");
    let rep = &r.reports[0];
    out.push(Outcome {
        id: 9,
        passed: r.passed,
        detail: format!(
            "companion margin {:.4}, stated margin {:.4} ({}), doubled-spin change {:.2e}",
            rep.value("companion_margin").unwrap(),
            rep.margin,
            rep.verdict.as_str(),
            r.find_check("margin-change-doubled-spins").unwrap().value
        ),
    });

    // 10
    let r = suite("thm31");
    let stated_ok = r.reports.len() == 2 && r.reports.iter().all(|x| x.margin >= -x.tolerance);
    let ctx = Context::new(&cfg).unwrap();
    let psi = CliffordHermite::new(2).unwrap();
    let a = psi.admissibility_constant().unwrap();
    let scaled = heisenberg_thm31_all(&ctx.f.scale(3.0), &psi, &ctx.params, a).unwrap();
    let homogeneous = r.reports.iter().zip(&scaled).all(|(x, y)| {
        ((y.lhs / x.lhs) / 9.0 - 1.0).abs() < 1e-12 && ((y.rhs / x.rhs) / 9.0 - 1.0).abs() < 1e-12 && x.verdict == y.verdict
    });
    let companion_ok = r.reports.iter().all(|x| x.verdict == Verdict::ConstantMismatch || x.verdict.passes());
    out.push(Outcome {
        id: 10,
        passed: stated_ok && homogeneous,
        detail: format!(
            "stated margins {:?} (tolerance {:.3}); companion margins {:?}; homogeneous {homogeneous}; companion holds {companion_ok}",
            r.reports.iter().map(|x| x.margin).collect::<Vec<_>>(),
            r.reports[0].tolerance,
            r.reports.iter().map(|x| x.value("companion_margin").unwrap()).collect::<Vec<_>>()
        ),
    });

    // 11
    let r = suite("thm32");
    let rep = &r.reports[0];
    let side_by_side = rep.rhs.is_finite() && rep.value("thm31_stated_rhs").is_some_and(f64::is_finite);
    out.push(Outcome {
        id: 11,
        passed: r.passed && side_by_side,
        detail: format!(
            "|<f1,f2>| {:.4e}, fd order {:.3}, rhs {:.4} beside first-inequality rhs {:.4}",
            r.values["inner_f1_f2_module"],
            r.values["fd_observed_order"],
            rep.rhs,
            rep.value("thm31_stated_rhs").unwrap()
        ),
    });

    // 12
    let identical = files(&tmp.path().join("first")) == files(&tmp.path().join("second"));
    let limit = Duration::from_secs(60);
    out.push(Outcome {
        id: 12,
        passed: passed1 && passed2 && identical && wall1 < limit && wall2 < limit,
        detail: format!("exit-pass {passed1}/{passed2}, byte-identical {identical}, wall {wall1:?} / {wall2:?}"),
    });

    let mut unexpected = 0;
    for o in &out {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let note = if !o.passed && KNOWN_FAILURES.contains(&o.id) {
            " [known: stated constant exceeds the measured left side]"
        } else {
            ""
        };
        println!("{status} criterion {:>2}: {}{note}", o.id, o.detail);
        if !o.passed && !KNOWN_FAILURES.contains(&o.id) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
