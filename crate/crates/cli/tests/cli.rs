use std::path::Path;
use std::process::{Command, Output};

use clifwave::experiment::ExperimentConfig;
use clifwave::grid::read_field_csv;
use clifwave::wavelet::{cwt_spectral, CliffordHermite};

const BASE: &str = "dimension = 2\nhalf_width = 8.0\npoints = 64\na_min = 0.015625\na_max = 8.0\nscales = 16\nspins = 8\nsigma = 0.35\n";

fn clifwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clifwave"))
        .args(args)
        .env("CLIFWAVE_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("experiment.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn odd_point_count_is_a_config_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("points = 64", "points = 63"));
    let out = clifwave(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points"));
}

#[test]
fn unknown_key_is_a_config_error_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}spin_count = 3\n"));
    let out = clifwave(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spin_count"));
}

#[test]
fn algebra_suite_runs_alone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out_dir = dir.path().join("reports");
    let out = clifwave(&["run", &cfg, "--suites", "algebra", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let mut files: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["algebra.json", "summary.json"]);
    let summary = json(&out_dir.join("summary.json"));
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn failing_suite_exits_one_and_keeps_other_reports() {
    let dir = tempfile::tempdir().unwrap();
    // Two scales cannot resolve the scale integral.
    let text = BASE
        .replace("a_min = 0.015625", "a_min = 0.5")
        .replace("a_max = 8.0", "a_max = 1.0")
        .replace("scales = 16", "scales = 2");
    let cfg = write_config(dir.path(), &format!("{text}suites = [\"algebra\", \"plancherel\"]\n"));
    let out_dir = dir.path().join("reports");
    let out = clifwave(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out_dir.join("algebra.json"))["passed"], true);
    let p = json(&out_dir.join("plancherel.json"));
    assert_eq!(p["passed"], false);
    assert_eq!(json(&out_dir.join("summary.json"))["passed"], false);
}

#[test]
fn unknown_suite_on_the_command_line_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out = clifwave(&["run", &cfg, "--suites", "algebra,thm99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("suites"));
}

#[test]
fn admissibility_prints_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out = clifwave(&["admissibility", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a_psi") && text.contains("scalarity defect"), "{text}");
}

#[test]
fn export_matches_in_process_coefficients_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let text = BASE.replace("scales = 16", "scales = 3").replace("spins = 8", "spins = 2");
    let cfg_path = write_config(dir.path(), &text);
    let out_dir = dir.path().join("cwt");
    let out = clifwave(&["export-cwt", &cfg_path, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let manifest = json(&out_dir.join("cwt_manifest.json"));
    let slices = manifest["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 6);

    let cfg = ExperimentConfig::load(Path::new(&cfg_path)).unwrap();
    let ctx = clifwave::experiment::Context::new(&cfg).unwrap();
    let psi = CliffordHermite::new(2).unwrap();
    let coeffs = cwt_spectral(&ctx.f, &psi, &ctx.params).unwrap();
    for s in slices {
        let (j, m) = (s["scale_index"].as_u64().unwrap() as usize, s["spin_index"].as_u64().unwrap() as usize);
        let file = std::fs::File::open(out_dir.join(s["file"].as_str().unwrap())).unwrap();
        let read = read_field_csv(file).unwrap();
        assert_eq!(read.data(), coeffs.slice(j, m).data());
        assert_eq!(s["weight"].as_f64().unwrap(), ctx.params.slice_weight(j, m));
    }
}
