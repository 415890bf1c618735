//! Derivative-free maximization of Bell functionals over measurement angles,
//! and bisection for the state parameter where the maximum crosses the
//! classical bound.
//!
//! Every restart is an independent Nelder-Mead run whose starting point is a
//! pure function of `(seed, restart index)`, so results do not depend on how
//! rayon schedules the restarts.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bell::{
    build_stochastic_matrix, chsh_value, i3_value, BellEvaluation, BellSettings, Functional,
    CLASSICAL_BOUND,
};
use crate::error::{Error, Result};
use crate::portrait::{enumerate_bipartitions, Partition};
use crate::states::{DensityMatrix, StateFamily};
use crate::wigner::{wrap_angle, wrap_polar, SpinJ};

/// Distance from the classical bound below which a maximum is considered
/// undecided and is recomputed with more restarts.
pub const VIOLATION_MARGIN: f64 = 1e-6;

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 0.5;
const POLISH_STEP: f64 = 0.1;
const MAX_POLISH_ROUNDS: usize = 2;
const UNDECIDED_RESTART_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Nelder-Mead runs per partition pair.
    pub restarts: usize,
    pub seed: u64,
    /// Stop once the simplex value spread drops below this.
    pub simplex_tolerance: f64,
    pub max_iterations: usize,
    /// Lattice points per angle for the deterministic starting points.
    pub coarse_grid_per_angle: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            simplex_tolerance: 1e-8,
            max_iterations: 2000,
            coarse_grid_per_angle: 4,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.coarse_grid_per_angle == 0 {
            return Err(Error::InvalidArgument(
                "restarts, max_iterations and coarse_grid_per_angle must be positive".into(),
            ));
        }
        if self.simplex_tolerance.is_nan() || self.simplex_tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "simplex tolerance must be positive, got {}",
                self.simplex_tolerance
            )));
        }
        Ok(())
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }
}

/// How coordinates are mapped back onto the parameter domain before each
/// objective call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Unbounded reals.
    Free,
    /// Every coordinate taken mod `2pi`.
    Periodic,
    /// Consecutive `(theta, phi)` pairs mapped onto the sphere chart.
    Sphere,
}

impl Domain {
    pub fn wrap(self, x: &mut [f64]) {
        match self {
            Domain::Free => {}
            Domain::Periodic => x.iter_mut().for_each(|v| *v = wrap_angle(*v)),
            Domain::Sphere => {
                for pair in x.chunks_exact_mut(2) {
                    let (t, p) = wrap_polar(pair[0], pair[1]);
                    pair[0] = t;
                    pair[1] = p;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    /// Maximizer, wrapped onto the domain.
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximizes `objective` starting from `x0` with the Nelder-Mead simplex
/// method (coefficients 1, 2, 0.5, 0.5 on the negated objective).
///
/// The simplex itself lives in unwrapped coordinates; only the point handed
/// to the objective is wrapped. After convergence the simplex is rebuilt
/// around the best vertex, at most twice, as long as that still improves the
/// value by more than the tolerance.
pub fn nelder_mead<F>(
    mut objective: F,
    x0: &[f64],
    domain: Domain,
    cfg: &OptimizerConfig,
) -> Result<NelderMeadResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty starting point".into()));
    }
    let mut evaluations = 0;
    let mut scratch = vec![0.0; n];
    // cost = -objective, minimized
    let mut cost = |x: &[f64]| -> Result<f64> {
        scratch.copy_from_slice(x);
        domain.wrap(&mut scratch);
        evaluations += 1;
        let v = objective(&scratch);
        if v.is_finite() {
            Ok(-v)
        } else {
            Err(Error::NonFinite(scratch.clone()))
        }
    };

    let tol = cfg.simplex_tolerance;
    let mut iterations = 0;
    let mut converged = false;
    let mut best = x0.to_vec();
    let mut best_cost = cost(&best)?;
    let mut step = INITIAL_STEP;

    for round in 0..=MAX_POLISH_ROUNDS {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best.clone(), best_cost));
        for i in 0..n {
            let mut v = best.clone();
            v[i] += step;
            let c = cost(&v)?;
            simplex.push((v, c));
        }
        converged = false;

        while iterations < cfg.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 < tol {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / n as f64;
                }
            }
            let toward = |from: &[f64], coeff: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + coeff * (x - c))
                    .collect()
            };
            let worst = simplex[n].0.clone();
            let reflected = toward(&worst, -REFLECTION);
            let reflected_cost = cost(&reflected)?;

            if reflected_cost < simplex[0].1 {
                let expanded = toward(&reflected, EXPANSION);
                let expanded_cost = cost(&expanded)?;
                simplex[n] = if expanded_cost < reflected_cost {
                    (expanded, expanded_cost)
                } else {
                    (reflected, reflected_cost)
                };
                continue;
            }
            if reflected_cost < simplex[n - 1].1 {
                simplex[n] = (reflected, reflected_cost);
                continue;
            }
            let (contracted, limit) = if reflected_cost < simplex[n].1 {
                (toward(&reflected, CONTRACTION), reflected_cost)
            } else {
                (toward(&worst, CONTRACTION), simplex[n].1)
            };
            let contracted_cost = cost(&contracted)?;
            if contracted_cost < limit {
                simplex[n] = (contracted, contracted_cost);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let shrunk: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, x)| a + SHRINK * (x - a))
                    .collect();
                let c = cost(&shrunk)?;
                *vertex = (shrunk, c);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improvement = best_cost - simplex[0].1;
        if simplex[0].1 <= best_cost {
            best = simplex[0].0.clone();
            best_cost = simplex[0].1;
        }
        if !converged || (round > 0 && improvement <= tol) || iterations >= cfg.max_iterations {
            break;
        }
        step = POLISH_STEP;
    }

    domain.wrap(&mut best);
    Ok(NelderMeadResult {
        x: best,
        value: -best_cost,
        evaluations,
        iterations,
        converged,
    })
}

fn is_coprime(a: usize, b: usize) -> bool {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x == 1
}

/// Starting angles for restart `index`.
///
/// Even restarts walk a lattice over `(theta_a, phi_a, theta_b, phi_b)` in a
/// fixed scrambled order, with `d` and `c` offset by `pi/2` in `theta` from
/// `a` and `b` as in the textbook CHSH arrangement. Odd restarts, and all
/// restarts once the lattice is exhausted, are uniform draws from a ChaCha
/// stream selected by the restart index.
pub fn start_point(index: usize, cfg: &OptimizerConfig) -> [f64; 8] {
    let g = cfg.coarse_grid_per_angle.max(1);
    let lattice = g.pow(4);
    if index.is_multiple_of(2) && index / 2 < lattice {
        let mut stride = (lattice as f64 * 0.618_033_988_75) as usize | 1;
        while !is_coprime(stride, lattice) {
            stride += 2;
        }
        let mut k = (index / 2 * stride) % lattice;
        let mut digit = || {
            let d = k % g;
            k /= g;
            d as f64
        };
        let theta_a = (digit() + 0.5) * PI / g as f64;
        let phi_a = digit() * TAU / g as f64;
        let theta_b = (digit() + 0.5) * PI / g as f64;
        let phi_b = digit() * TAU / g as f64;
        return [
            theta_a,
            phi_a,
            theta_b,
            phi_b,
            theta_b + FRAC_PI_2,
            phi_b,
            theta_a + FRAC_PI_2,
            phi_a,
        ];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut x = [0.0; 8];
    for pair in x.chunks_exact_mut(2) {
        pair[0] = rng.gen_range(0.0..PI);
        pair[1] = rng.gen_range(0.0..TAU);
    }
    x
}

/// Result of a multistart maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct BellMaximum {
    pub best: BellEvaluation,
    pub evaluations_used: usize,
    /// Best value of every restart, ordered by (partition pair, restart);
    /// restarts aborted on a non-finite objective are recorded as `-inf`.
    pub per_restart_values: Vec<f64>,
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

type PartitionPair<'a> = Option<(&'a Partition, &'a Partition)>;

struct Task<'a> {
    parts: Option<(&'a Partition, &'a Partition)>,
    restart: usize,
}

fn run_multistart<'a, F>(
    tasks: Vec<Task<'a>>,
    functional: Functional,
    cfg: &OptimizerConfig,
    objective: F,
) -> Result<BellMaximum>
where
    F: Fn(&[f64], Option<(&Partition, &Partition)>) -> f64 + Sync,
{
    cfg.validate()?;
    let results: Vec<(Result<NelderMeadResult>, PartitionPair)> = tasks
        .into_par_iter()
        .map(|task| {
            let x0 = start_point(task.restart, cfg);
            let parts = task.parts;
            let r = nelder_mead(|x| objective(x, parts), &x0, Domain::Sphere, cfg);
            (r, parts)
        })
        .collect();

    let mut evaluations_used = 0;
    let mut per_restart_values = Vec::with_capacity(results.len());
    let mut best: Option<(NelderMeadResult, Option<(&Partition, &Partition)>)> = None;
    for (result, parts) in results {
        let r = match result {
            Ok(r) => r,
            Err(_) => {
                per_restart_values.push(f64::NEG_INFINITY);
                continue;
            }
        };
        evaluations_used += r.evaluations;
        per_restart_values.push(r.value);
        let better = match &best {
            None => true,
            Some((b, _)) => match r.value.total_cmp(&b.value) {
                Ordering::Greater => true,
                Ordering::Equal => lexicographic(&r.x, &b.x).is_lt(),
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((r, parts));
        }
    }
    let (winner, parts) = best.ok_or_else(|| {
        Error::InvalidArgument("every restart produced a non-finite objective".into())
    })?;
    Ok(BellMaximum {
        best: BellEvaluation {
            value: winner.value,
            settings: BellSettings::from_angles(&winner.x)?,
            partitions: parts.map(|(a, b)| (a.clone(), b.clone())),
            functional,
        },
        evaluations_used,
        per_restart_values,
    })
}

/// Maximum of the portrait CHSH value over all partition pairs and all
/// polarization directions (`gamma` fixed to 0).
pub fn maximize_chsh(
    rho: &DensityMatrix,
    spins: (SpinJ, SpinJ),
    cfg: &OptimizerConfig,
) -> Result<BellMaximum> {
    if spins.0.dim() * spins.1.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "spins {}/2 x {}/2 do not match state dimension {}",
            spins.0.two_j(),
            spins.1.two_j(),
            rho.dim()
        )));
    }
    let parts1 = enumerate_bipartitions(spins.0.dim())?;
    let parts2 = enumerate_bipartitions(spins.1.dim())?;
    let mut tasks = Vec::new();
    for p1 in &parts1 {
        for p2 in &parts2 {
            for restart in 0..cfg.restarts {
                tasks.push(Task {
                    parts: Some((p1, p2)),
                    restart,
                });
            }
        }
    }
    run_multistart(tasks, Functional::Chsh, cfg, |x, parts| {
        let parts = parts.expect("CHSH tasks carry partitions");
        BellSettings::from_angles(x)
            .and_then(|s| build_stochastic_matrix(rho, spins, &s, parts))
            .map(|m| chsh_value(&m))
            .unwrap_or(f64::NAN)
    })
}

/// Maximum of `I3` over the four spin-1 polarization directions.
pub fn maximize_i3(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<BellMaximum> {
    if rho.dim() != 9 {
        return Err(Error::DimensionMismatch(format!(
            "I3 needs a two-qutrit state, got dimension {}",
            rho.dim()
        )));
    }
    let tasks = (0..cfg.restarts)
        .map(|restart| Task {
            parts: None,
            restart,
        })
        .collect();
    run_multistart(tasks, Functional::I3, cfg, |x, _| {
        BellSettings::from_angles(x)
            .and_then(|s| i3_value(rho, &s))
            .unwrap_or(f64::NAN)
    })
}

/// Dispatches to [`maximize_chsh`] or [`maximize_i3`].
pub fn maximize(
    functional: Functional,
    rho: &DensityMatrix,
    spins: (SpinJ, SpinJ),
    cfg: &OptimizerConfig,
) -> Result<BellMaximum> {
    match functional {
        Functional::Chsh => maximize_chsh(rho, spins, cfg),
        Functional::I3 => {
            if spins != (SpinJ::ONE, SpinJ::ONE) {
                return Err(Error::InvalidArgument("I3 is defined for two qutrits".into()));
            }
            maximize_i3(rho, cfg)
        }
    }
}

/// Maximum for a member of a state family on `C^d (x) C^d`.
pub fn maximize_family(
    family: StateFamily,
    d: usize,
    param: f64,
    functional: Functional,
    cfg: &OptimizerConfig,
) -> Result<BellMaximum> {
    let rho = family.state(d, param)?;
    let spin = SpinJ::from_dim(d)?;
    maximize(functional, &rho, (spin, spin), cfg)
}

/// Outcome of a threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    /// Midpoint of the final bracket.
    pub param: f64,
    /// Final `(no violation, violation)` parameter pair.
    pub bracket: (f64, f64),
    /// Every `(parameter, maximum)` evaluated, in order.
    pub trace: Vec<(f64, f64)>,
}

/// Bisects the family parameter for the point where the maximized
/// functional crosses the classical bound.
///
/// One bracket end must violate the bound and the other must not; either
/// orientation is accepted. Maxima within [`VIOLATION_MARGIN`] of the bound
/// are recomputed with four times the restarts before their side is decided.
pub fn find_threshold(
    family: StateFamily,
    d: usize,
    functional: Functional,
    cfg: &OptimizerConfig,
    bracket: (f64, f64),
    tol: f64,
) -> Result<Threshold> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (lo, hi) = bracket;
    let mut trace = Vec::new();
    let mut side = |param: f64| -> Result<bool> {
        let mut value = maximize_family(family, d, param, functional, cfg)?.best.value;
        if (value - CLASSICAL_BOUND).abs() <= VIOLATION_MARGIN {
            let refined = cfg.with_restarts(cfg.restarts * UNDECIDED_RESTART_FACTOR);
            value = maximize_family(family, d, param, functional, &refined)?.best.value;
        }
        trace.push((param, value));
        Ok(value > CLASSICAL_BOUND)
    };

    let lo_violates = side(lo)?;
    let hi_violates = side(hi)?;
    if lo_violates == hi_violates {
        return Err(Error::Bracket {
            lo,
            hi,
            value_lo: trace[0].1,
            value_hi: trace[1].1,
        });
    }
    let (mut classical, mut quantum) = if lo_violates { (hi, lo) } else { (lo, hi) };
    while (quantum - classical).abs() > tol {
        let mid = 0.5 * (classical + quantum);
        if side(mid)? {
            quantum = mid;
        } else {
            classical = mid;
        }
    }
    Ok(Threshold {
        param: 0.5 * (classical + quantum),
        bracket: (classical, quantum),
        trace,
    })
}
