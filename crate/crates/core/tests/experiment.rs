use std::path::Path;

use clifwave::experiment::{run, run_suite, Context, ExperimentConfig, SUITES};

fn reference() -> ExperimentConfig {
    ExperimentConfig::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml")).unwrap()
}

#[test]
fn reference_config_selects_every_suite() {
    let cfg = reference();
    assert_eq!(cfg.selected_suites(), SUITES.to_vec());
    assert_eq!((cfg.dimension, cfg.points, cfg.scales, cfg.spins), (2, 64, 16, 8));
}

#[test]
fn inequality_reports_carry_the_documented_fields() {
    let cfg = reference().with_suites(vec!["thm33".into()]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&cfg, dir.path(), |_, _| {}).unwrap();
    assert!(summary.passed);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("thm33.json")).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let reports = v["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        for key in ["name", "lhs", "rhs", "margin", "tolerance", "verdict", "diagnostics"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        for key in ["tail_mass", "refinement_delta", "constant_ratios"] {
            assert!(r["diagnostics"].get(key).is_some(), "missing diagnostics.{key}");
        }
        assert!(r["diagnostics"]["refinement_delta"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn mixture_and_shifted_inputs_run_the_fourier_suite() {
    for extra in ["function = \"gaussian-mixture\"\ncount = 4\n", "function = \"shifted-gaussian\"\nshift = [1.0, -0.5]\n"] {
        let text = format!(
            "dimension = 2\nhalf_width = 8.0\npoints = 64\na_min = 0.015625\na_max = 8.0\nscales = 16\nspins = 8\n{extra}"
        );
        let cfg = ExperimentConfig::from_toml_str(&text, Path::new(".")).unwrap();
        let ctx = Context::new(&cfg).unwrap();
        let r = run_suite("fourier", &ctx).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn field_file_inputs_are_checked_against_the_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference();
    let ctx = Context::new(&cfg).unwrap();
    let path = dir.path().join("f.csv");
    clifwave::grid::write_field_csv(&ctx.f, std::fs::File::create(&path).unwrap()).unwrap();
    let base = "dimension = 2\nhalf_width = 8.0\na_min = 0.015625\na_max = 8.0\nscales = 16\nspins = 8\nfunction = \"from-file\"\nfunction_file = \"f.csv\"\n";
    let ok = ExperimentConfig::from_toml_str(&format!("{base}points = 64\n"), dir.path()).unwrap();
    assert_eq!(Context::new(&ok).unwrap().f.data(), ctx.f.data());
    let wrong = ExperimentConfig::from_toml_str(&format!("{base}points = 32\n"), dir.path()).unwrap();
    match Context::new(&wrong) {
        Err(clifwave::Error::Config { field, .. }) => assert_eq!(field, "function_file"),
        other => panic!("{:?}", other.map(|_| ())),
    }
}
