use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use tomobell_core::bell::Functional;
use tomobell_core::optimizer::{maximize, BellMaximum, OptimizerConfig, VIOLATION_MARGIN};
use tomobell_core::states::{parse_density_matrix, BipartiteDims, DensityMatrix};
use tomobell_core::wigner::SpinJ;

use crate::error::{CliError, ExitCode, Result};

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub state_file: PathBuf,
    pub functional: Functional,
    pub optimizer: OptimizerConfig,
    pub out_path: Option<PathBuf>,
}

/// Reads and validates a density-matrix file.
pub fn load_state(path: &Path) -> Result<(DensityMatrix, BipartiteDims)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_density_matrix(&text).map_err(|source| CliError::StateFile {
        path: path.to_path_buf(),
        source,
    })
}

pub fn render(maximum: &BellMaximum) -> String {
    let best = &maximum.best;
    let mut out = String::new();
    let _ = writeln!(out, "functional = {}", best.functional);
    let _ = writeln!(out, "value = {:.10}", best.value);
    let names = ["a", "b", "c", "d"];
    for (name, pair) in names.iter().zip(best.settings.angles().chunks_exact(2)) {
        let _ = writeln!(out, "{name}: theta = {:.10} phi = {:.10}", pair[0], pair[1]);
    }
    if let Some((p1, p2)) = &best.partitions {
        let _ = writeln!(out, "partitions = {p1} {p2}");
    }
    let verdict = if best.violates_classical_bound(VIOLATION_MARGIN) {
        "violated"
    } else {
        "not violated"
    };
    let _ = writeln!(out, "classical bound 2: {verdict}");
    out
}

/// Maximizes the functional for the state in the file and prints the result.
/// The returned exit code is [`ExitCode::Violation`] when the maximum exceeds
/// the classical bound.
pub fn run_eval(args: &EvalArgs) -> Result<(BellMaximum, ExitCode)> {
    args.optimizer
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (rho, dims) = load_state(&args.state_file)?;
    if dims.d1 < 2 || dims.d2 < 2 {
        return Err(CliError::Usage("both subsystems need dimension at least 2".into()));
    }
    let spins = (SpinJ::from_dim(dims.d1)?, SpinJ::from_dim(dims.d2)?);
    if args.functional == Functional::I3 && (dims.d1, dims.d2) != (3, 3) {
        return Err(CliError::Usage("the i3 functional requires a 3 x 3 state".into()));
    }
    let maximum = maximize(args.functional, &rho, spins, &args.optimizer)?;
    let text = render(&maximum);
    print!("{text}");
    if let Some(path) = &args.out_path {
        fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
    }
    let code = if maximum.best.violates_classical_bound(VIOLATION_MARGIN) {
        ExitCode::Violation
    } else {
        ExitCode::Success
    };
    Ok((maximum, code))
}
