use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};
use tomobell::error::{CliError, ExitCode, Result};
use tomobell::eval::{run_eval, EvalArgs};
use tomobell::plot::emit_plot;
use tomobell::sweep::{run_sweep, SweepConfig};
use tomobell::threshold::{run_threshold, ThresholdArgs, DEFAULT_TOLERANCE};
use tomobell_core::bell::Functional;
use tomobell_core::optimizer::OptimizerConfig;
use tomobell_core::states::StateFamily;

/// Tomographic Bell-inequality tests for Werner and isotropic states.
#[derive(Debug, Parser)]
#[command(name = "tomobell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximize a Bell functional over a range of family parameters and write a CSV.
    Sweep(SweepCmd),
    /// Bisect for the parameter where the classical bound starts to be violated.
    Threshold(ThresholdCmd),
    /// Maximize a Bell functional for a state read from a file.
    Eval(EvalCmd),
    /// Render a sweep CSV as an SVG figure.
    Plot(PlotCmd),
}

#[derive(Debug, Args)]
struct OptimizerFlags {
    /// Multistart restarts per partition pair.
    #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
    restarts: usize,
    /// Seed of the start-point generator.
    #[arg(long, default_value_t = OptimizerConfig::default().seed)]
    seed: u64,
}

impl OptimizerFlags {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct SweepCmd {
    #[arg(long)]
    family: StateFamily,
    /// Local dimension of each subsystem.
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "chsh")]
    functional: Functional,
    /// Defaults to the lower end of the family's domain.
    #[arg(long, allow_hyphen_values = true)]
    param_min: Option<f64>,
    /// Defaults to the upper end of the family's domain.
    #[arg(long, allow_hyphen_values = true)]
    param_max: Option<f64>,
    #[arg(long, default_value_t = 21)]
    steps: usize,
    #[command(flatten)]
    optimizer: OptimizerFlags,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG output path.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ThresholdCmd {
    #[arg(long)]
    family: StateFamily,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "chsh")]
    functional: Functional,
    /// Bracket end point (defaults: isotropic 0.5, werner -1).
    #[arg(long, allow_hyphen_values = true)]
    param_min: Option<f64>,
    /// Bracket end point (defaults: isotropic 1, werner 0).
    #[arg(long, allow_hyphen_values = true)]
    param_max: Option<f64>,
    /// Width of the final bracket.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[command(flatten)]
    optimizer: OptimizerFlags,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalCmd {
    /// Density-matrix file (`dim <d1> <d2>` header, then `<re> <im>` lines).
    #[arg(long)]
    state_file: PathBuf,
    #[arg(long, default_value = "chsh")]
    functional: Functional,
    #[command(flatten)]
    optimizer: OptimizerFlags,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotCmd {
    /// Sweep CSV to read.
    #[arg(long)]
    out: PathBuf,
    /// SVG file to write.
    #[arg(long)]
    plot: PathBuf,
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("TOMOBELL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("TOMOBELL_THREADS must be a positive integer, got '{value}'")))?;
    // Only fails if a global pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Sweep(cmd) => {
            let (lo, hi) = cmd.family.domain();
            let cfg = SweepConfig {
                family: cmd.family,
                dim: cmd.dim,
                functional: cmd.functional,
                param_min: cmd.param_min.unwrap_or(lo),
                param_max: cmd.param_max.unwrap_or(hi),
                steps: cmd.steps,
                optimizer: cmd.optimizer.config(),
                out_path: cmd.out,
                plot_path: cmd.plot,
            };
            let records = run_sweep(&cfg)?;
            println!("wrote {} records to {}", records.len(), cfg.out_path.display());
            Ok(ExitCode::Success)
        }
        Command::Threshold(cmd) => {
            run_threshold(&ThresholdArgs {
                family: cmd.family,
                dim: cmd.dim,
                functional: cmd.functional,
                param_min: cmd.param_min,
                param_max: cmd.param_max,
                tol: cmd.tol,
                optimizer: cmd.optimizer.config(),
                out_path: cmd.out,
            })?;
            Ok(ExitCode::Success)
        }
        Command::Eval(cmd) => {
            let (_, code) = run_eval(&EvalArgs {
                state_file: cmd.state_file,
                functional: cmd.functional,
                optimizer: cmd.optimizer.config(),
                out_path: cmd.out,
            })?;
            Ok(code)
        }
        Command::Plot(cmd) => {
            emit_plot(&cmd.out, &cmd.plot)?;
            Ok(ExitCode::Success)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tomobell: error: {e}");
            e.exit_code()
        }
    };
    process::exit(code as i32);
}
