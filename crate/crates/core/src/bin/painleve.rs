use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use painleve_core::experiment::{run, ExperimentConfig, Mode, RunError, SweepParam};
use painleve_core::Error;

/// Reference solves, perturbation series, extraordinary Painlevé II
/// sequences and parameter sweeps, written as CSV files.
#[derive(Debug, Parser)]
#[command(name = "painleve", version)]
struct Cli {
    /// Flat key = value file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Odd node count, at least 257.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// reference | series | extraordinary | direct | sweep
    #[arg(long)]
    mode: Option<String>,
    /// Output directory.
    #[arg(long, env = "PII_OUT_DIR")]
    out: Option<PathBuf>,
    /// Parameter varied by a sweep (sigma, tau, nu, mu).
    #[arg(long)]
    sweep_param: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sweep_from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sweep_to: Option<f64>,
    #[arg(long)]
    sweep_step: Option<f64>,
    /// Sweep worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, RunError> {
    let mut c = ExperimentConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| {
            RunError::config(Error::Validation(format!("cannot read {}: {e}", path.display())))
        })?;
        c.apply_text(&text).map_err(RunError::config)?;
    }
    macro_rules! set {
        ($field:expr, $value:expr) => {
            if let Some(v) = $value {
                $field = v;
            }
        };
    }
    set!(c.params.sigma, cli.sigma);
    set!(c.params.tau, cli.tau);
    set!(c.params.nu, cli.nu);
    set!(c.params.mu, cli.mu);
    set!(c.n_max, cli.n_max);
    set!(c.grid_size, cli.grid);
    set!(c.tol, cli.tol);
    set!(c.out_dir, cli.out.clone());
    set!(c.sweep.from, cli.sweep_from);
    set!(c.sweep.to, cli.sweep_to);
    set!(c.sweep.step, cli.sweep_step);
    if let Some(m) = &cli.mode {
        c.mode = m.parse::<Mode>().map_err(RunError::config)?;
    }
    if let Some(p) = &cli.sweep_param {
        c.sweep.param = p.parse::<SweepParam>().map_err(RunError::config)?;
    }
    if cli.workers.is_some() {
        c.workers = cli.workers;
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = build_config(&cli).and_then(|c| {
        for w in c.warnings() {
            eprintln!("warning: {w}");
        }
        run(&c)
    });
    match outcome {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            if summary.failed_points > 0 {
                eprintln!("{} sweep point(s) failed", summary.failed_points);
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
