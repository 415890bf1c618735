use std::path::PathBuf;

use rayon::prelude::*;
use tomobell_core::bell::{Functional, CLASSICAL_BOUND};
use tomobell_core::optimizer::{maximize_family, OptimizerConfig};
use tomobell_core::states::{purity, StateFamily};

use crate::error::{CliError, Result};
use crate::plot;
use crate::records::{write_csv, SweepMeta, SweepRecord};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: StateFamily,
    /// Local dimension `d` of each subsystem.
    pub dim: usize,
    pub functional: Functional,
    pub param_min: f64,
    pub param_max: f64,
    pub steps: usize,
    pub optimizer: OptimizerConfig,
    pub out_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn meta(&self) -> SweepMeta {
        SweepMeta {
            family: self.family,
            dim: self.dim,
            functional: self.functional,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.family.domain();
        if !(lo..=hi).contains(&self.param_min) || !(lo..=hi).contains(&self.param_max) {
            return Err(CliError::Usage(format!(
                "{} parameter range [{}, {}] must lie inside [{lo}, {hi}]",
                self.family, self.param_min, self.param_max
            )));
        }
        if self.param_min > self.param_max {
            return Err(CliError::Usage("--param-min exceeds --param-max".into()));
        }
        if self.steps == 0 {
            return Err(CliError::Usage("--steps must be positive".into()));
        }
        if self.dim < 2 {
            return Err(CliError::Usage("--dim must be at least 2".into()));
        }
        if self.functional == Functional::I3 && self.dim != 3 {
            return Err(CliError::Usage("the i3 functional requires --dim 3".into()));
        }
        self.optimizer
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// `steps` equally spaced parameters including both end points.
    pub fn params(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.param_min];
        }
        let span = self.param_max - self.param_min;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.param_max
                } else {
                    self.param_min + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

/// Maximizes the functional at one parameter value.
pub fn evaluate_point(cfg: &SweepConfig, param: f64) -> Result<SweepRecord> {
    let rho = cfg.family.state(cfg.dim, param)?;
    let maximum = maximize_family(cfg.family, cfg.dim, param, cfg.functional, &cfg.optimizer)?;
    let (partition1, partition2) = match &maximum.best.partitions {
        Some((p1, p2)) => (p1.to_string(), p2.to_string()),
        None => (String::new(), String::new()),
    };
    Ok(SweepRecord {
        param,
        bell_max: maximum.best.value,
        classical_bound: CLASSICAL_BOUND,
        purity: purity(&rho),
        angles: maximum.best.settings.angles(),
        partition1,
        partition2,
        separable: cfg.family.is_separable(cfg.dim, param),
    })
}

/// Evaluates every sweep point, then writes the CSV (and the plot, if
/// requested) once all points are in. Records come back in parameter order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let records = cfg
        .params()
        .into_par_iter()
        .map(|p| evaluate_point(cfg, p))
        .collect::<Result<Vec<_>>>()?;
    write_csv(&cfg.out_path, &cfg.meta(), &records)?;
    if let Some(plot_path) = &cfg.plot_path {
        plot::write_svg(plot_path, Some(&cfg.meta()), &records)?;
    }
    Ok(records)
}
