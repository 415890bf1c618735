use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use tomobell_core::bell::Functional;
use tomobell_core::optimizer::{find_threshold, OptimizerConfig, Threshold};
use tomobell_core::states::{isotropic_param_to_singlet_fraction, StateFamily};

use crate::error::{CliError, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct ThresholdArgs {
    pub family: StateFamily,
    pub dim: usize,
    pub functional: Functional,
    /// Overrides the family's default bracket end points when set.
    pub param_min: Option<f64>,
    pub param_max: Option<f64>,
    pub tol: f64,
    pub optimizer: OptimizerConfig,
    pub out_path: Option<PathBuf>,
}

/// Default search bracket. Both end points sit clearly on opposite sides of
/// the classical bound for every supported dimension.
pub fn default_bracket(family: StateFamily) -> (f64, f64) {
    match family {
        StateFamily::Isotropic => (0.5, 1.0),
        StateFamily::Werner => (-1.0, 0.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub threshold: Threshold,
    /// `q = (9p - 1) / 8`, reported for two-qutrit isotropic states only.
    pub singlet_fraction: Option<f64>,
}

impl ThresholdReport {
    pub fn render(&self, args: &ThresholdArgs) -> String {
        let mut out = String::new();
        let sym = args.family.parameter_symbol();
        let _ = writeln!(
            out,
            "# family={} dim={} functional={}",
            args.family, args.dim, args.functional
        );
        let _ = writeln!(out, "{sym} = {:.6}", self.threshold.param);
        if let Some(q) = self.singlet_fraction {
            let _ = writeln!(out, "q = {q:.6}");
        }
        let (classical, quantum) = self.threshold.bracket;
        let _ = writeln!(out, "bracket = [{classical:.8}, {quantum:.8}]");
        let _ = writeln!(out, "evaluations = {}", self.threshold.trace.len());
        out
    }
}

pub fn validate(args: &ThresholdArgs) -> Result<()> {
    if args.dim < 2 {
        return Err(CliError::Usage("--dim must be at least 2".into()));
    }
    if args.functional == Functional::I3 && args.dim != 3 {
        return Err(CliError::Usage("the i3 functional requires --dim 3".into()));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let (lo, hi) = args.family.domain();
    for v in [args.param_min, args.param_max].into_iter().flatten() {
        if !(lo..=hi).contains(&v) {
            return Err(CliError::Usage(format!(
                "{} parameter {v} outside [{lo}, {hi}]",
                args.family
            )));
        }
    }
    args.optimizer
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Bisects for the violation threshold, prints the report to stdout and, if
/// requested, writes the same text to the output file.
pub fn run_threshold(args: &ThresholdArgs) -> Result<ThresholdReport> {
    validate(args)?;
    let (lo, hi) = default_bracket(args.family);
    let bracket = (args.param_min.unwrap_or(lo), args.param_max.unwrap_or(hi));
    let threshold = find_threshold(
        args.family,
        args.dim,
        args.functional,
        &args.optimizer,
        bracket,
        args.tol,
    )?;
    let singlet_fraction = match (args.family, args.dim) {
        (StateFamily::Isotropic, 3) => Some(isotropic_param_to_singlet_fraction(threshold.param)?),
        _ => None,
    };
    let report = ThresholdReport {
        threshold,
        singlet_fraction,
    };
    let text = report.render(args);
    print!("{text}");
    if let Some(path) = &args.out_path {
        fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(family: StateFamily, dim: usize) -> ThresholdArgs {
        ThresholdArgs {
            family,
            dim,
            functional: Functional::Chsh,
            param_min: None,
            param_max: None,
            tol: DEFAULT_TOLERANCE,
            optimizer: OptimizerConfig::default(),
            out_path: None,
        }
    }

    #[test]
    fn validation() {
        assert!(validate(&args(StateFamily::Isotropic, 3)).is_ok());
        assert!(validate(&args(StateFamily::Isotropic, 1)).is_err());
        let mut a = args(StateFamily::Isotropic, 2);
        a.functional = Functional::I3;
        assert!(validate(&a).is_err());
        let mut a = args(StateFamily::Isotropic, 3);
        a.param_min = Some(-0.2);
        assert!(validate(&a).is_err());
        let mut a = args(StateFamily::Werner, 2);
        a.tol = 0.0;
        assert!(validate(&a).is_err());
    }

    #[test]
    fn report_lists_parameter_and_singlet_fraction() {
        let report = ThresholdReport {
            threshold: Threshold {
                param: 0.7893,
                bracket: (0.78925, 0.78935),
                trace: vec![],
            },
            singlet_fraction: Some(0.763),
        };
        let text = report.render(&args(StateFamily::Isotropic, 3));
        assert!(text.contains("p = 0.789300\n"));
        assert!(text.contains("q = 0.763000\n"));
    }
}
