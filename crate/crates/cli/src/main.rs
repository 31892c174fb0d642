use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clifwave::experiment::{export_cwt, run, ExperimentConfig, WaveletChoice};
use clifwave::grid::{read_field_csv, GridSpec};
use clifwave::wavelet::{admissibility, CliffordHermite, MotherWavelet};
use clifwave::Error;

/// Worker-count override for the transform thread pool.
const THREADS_ENV: &str = "CLIFWAVE_THREADS";

#[derive(Parser)]
#[command(name = "clifwave", version, about = "Clifford wavelet uncertainty verification runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and write JSON reports.
    Run {
        config: PathBuf,
        /// Report directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated suite names (overrides `suites` in the config).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
    /// Print the admissibility constant and defects of the configured wavelet.
    Admissibility { config: PathBuf },
    /// Write per-slice coefficient CSVs and a JSON manifest.
    ExportCwt {
        config: PathBuf,
        /// Export directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_failure(e: &Error) -> ExitCode {
    eprintln!("clifwave: {e}");
    ExitCode::from(2)
}

fn runtime_failure(e: &Error) -> ExitCode {
    eprintln!("clifwave: {e}");
    ExitCode::from(1)
}

fn load(path: &Path) -> Result<ExperimentConfig, ExitCode> {
    ExperimentConfig::load(path).map_err(|e| config_failure(&e))
}

fn init_threads() -> Result<(), ExitCode> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            eprintln!("clifwave: {THREADS_ENV} must be a positive integer, got `{v}`");
            return Err(ExitCode::from(2));
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| {
            eprintln!("clifwave: cannot start {n} workers: {e}");
            ExitCode::from(1)
        })
}

fn cmd_run(config: &Path, out: Option<PathBuf>, suites: Option<Vec<String>>) -> Result<ExitCode, ExitCode> {
    let mut cfg = load(config)?;
    if let Some(s) = suites {
        cfg = cfg.with_suites(s).map_err(|e| config_failure(&e))?;
    }
    let out = out.unwrap_or_else(|| cfg.output.clone());
    let summary = run(&cfg, &out, |r, elapsed| {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {:<14} {:>8.2}s", r.suite, elapsed.as_secs_f64());
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("     check {} = {:e}", c.name, c.value);
        }
        if let Some(e) = &r.error {
            println!("     error {e}");
        }
    })
    .map_err(|e| runtime_failure(&e))?;
    println!("reports in {}", out.display());
    Ok(if summary.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_admissibility(config: &Path) -> Result<ExitCode, ExitCode> {
    let cfg = load(config)?;
    let n = cfg.dimension;
    let (field, closed_form) = match cfg.wavelet {
        WaveletChoice::CliffordHermite => {
            let grid = GridSpec::centered(n, cfg.half_width, cfg.points).map_err(|e| config_failure(&e))?;
            let psi = CliffordHermite::new(n).map_err(|e| config_failure(&e))?;
            (psi.sample(grid).map_err(|e| runtime_failure(&e))?, psi.admissibility_constant())
        }
        WaveletChoice::FromFile => {
            let path = cfg.wavelet_file.as_deref().expect("validated");
            let file = std::fs::File::open(path).map_err(|e| config_failure(&Error::Io(e)))?;
            (
                read_field_csv(std::io::BufReader::new(file)).map_err(|e| config_failure(&e))?,
                None,
            )
        }
    };
    match admissibility(&field) {
        Ok(a) => {
            println!("a_psi              {:e}", a.a_psi);
            if let Some(c) = closed_form {
                println!("a_psi closed form  {c:e}");
                println!("relative error     {:e}", (a.a_psi / c - 1.0).abs());
            }
            println!("scalarity defect   {:e}", a.scalarity_defect);
            println!("vanishing defect   {:e}", a.vanishing_defect);
            println!(
                "central cube       {:e} {:e} {:e}",
                a.central_refinement[0], a.central_refinement[1], a.central_refinement[2]
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("not admissible: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_export(config: &Path, out: Option<PathBuf>) -> Result<ExitCode, ExitCode> {
    let cfg = load(config)?;
    let out = out.unwrap_or_else(|| cfg.output.clone());
    let manifest = export_cwt(&cfg, &out).map_err(|e| runtime_failure(&e))?;
    println!("{} slices written to {}", manifest.slices.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(code) = init_threads() {
        return code;
    }
    let result = match cli.command {
        Command::Run { config, out, suites } => cmd_run(&config, out, suites),
        Command::Admissibility { config } => cmd_admissibility(&config),
        Command::ExportCwt { config, out } => cmd_export(&config, out),
    };
    result.unwrap_or_else(|code| code)
}
