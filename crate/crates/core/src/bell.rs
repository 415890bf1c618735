//! CHSH through stochastic matrices, and the two-qutrit `I3` functional.
//!
//! For CHSH, directions `a`, `d` act on the first subsystem and `b`, `c` on
//! the second; columns of the stochastic matrix are the setting pairs
//! `(a,b), (a,c), (d,b), (d,c)` and rows the dichotomic outcomes
//! `(+,+), (+,-), (-,+), (-,-)`. `I3` pairs the settings as
//! `(a,b), (c,b), (c,d), (a,d)`, i.e. `a`, `c` on the first subsystem.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::portrait::{two_qubit_portrait, Partition};
use crate::states::{BipartiteDims, DensityMatrix};
use crate::tolerance::TOL;
use crate::tomography::{ConditionedState, JointTomogram};
use crate::wigner::{wigner_d, MeasurementDirection, SpinJ};

/// Classical (local hidden variable) bound shared by CHSH and `I3`.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Fixed sign kernel `I` with `B = |tr(I M)|`.
pub const CHSH_KERNEL: [[f64; 4]; 4] = [
    [1.0, -1.0, -1.0, 1.0],
    [1.0, -1.0, -1.0, 1.0],
    [1.0, -1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0, -1.0],
];

/// Bell functional to maximize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    Chsh,
    I3,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::Chsh => "chsh",
            Functional::I3 => "i3",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chsh" => Ok(Functional::Chsh),
            "i3" => Ok(Functional::I3),
            other => Err(Error::InvalidArgument(format!("unknown functional '{other}'"))),
        }
    }
}

/// Four measurement directions `a, b, c, d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSettings {
    pub a: MeasurementDirection,
    pub b: MeasurementDirection,
    pub c: MeasurementDirection,
    pub d: MeasurementDirection,
}

impl BellSettings {
    /// Settings from `[theta_a, phi_a, theta_b, phi_b, .., theta_d, phi_d]`
    /// with every `gamma = 0`.
    pub fn from_angles(x: &[f64]) -> Result<Self> {
        if x.len() != 8 {
            return Err(Error::InvalidArgument(format!(
                "expected 8 angles, got {}",
                x.len()
            )));
        }
        let dir = |k: usize| MeasurementDirection::polar(x[2 * k], x[2 * k + 1]);
        Ok(Self {
            a: dir(0),
            b: dir(1),
            c: dir(2),
            d: dir(3),
        })
    }

    /// Polar angles in the order accepted by [`Self::from_angles`].
    pub fn angles(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, dir) in [self.a, self.b, self.c, self.d].iter().enumerate() {
            out[2 * k] = dir.theta();
            out[2 * k + 1] = dir.phi();
        }
        out
    }
}

/// Column-stochastic 4x4 matrix of two-qubit portrait distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochasticMatrix4 {
    entries: [[f64; 4]; 4],
}

impl StochasticMatrix4 {
    /// Validates nonnegativity and unit column sums; clamps roundoff.
    pub fn new(mut entries: [[f64; 4]; 4]) -> Result<Self> {
        for col in 0..4 {
            let mut sum = 0.0;
            for row in entries.iter_mut() {
                let v = &mut row[col];
                if !v.is_finite() || *v < -TOL.probability_clamp {
                    return Err(Error::Invariant {
                        invariant: "nonnegative entries",
                        detail: format!("entry {v} in column {col}"),
                    });
                }
                *v = v.max(0.0);
                sum += *v;
            }
            if (sum - 1.0).abs() > TOL.probability_sum {
                return Err(Error::Invariant {
                    invariant: "column stochastic",
                    detail: format!("column {col} sums to {sum}"),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Matrix whose columns are the given 2x2 joint distributions.
    pub fn from_columns(columns: [&JointTomogram; 4]) -> Result<Self> {
        let mut entries = [[0.0; 4]; 4];
        for (col, jt) in columns.iter().enumerate() {
            if jt.rows() != 2 || jt.cols() != 2 {
                return Err(Error::DimensionMismatch(format!(
                    "stochastic matrix columns must be 2x2, got {}x{}",
                    jt.rows(),
                    jt.cols()
                )));
            }
            for (row, p) in jt.probs().iter().enumerate() {
                entries[row][col] = *p;
            }
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    /// Correlation `P(++) - P(+-) - P(-+) + P(--)` of column `col`.
    pub fn correlation(&self, col: usize) -> f64 {
        let e = &self.entries;
        e[0][col] - e[1][col] - e[2][col] + e[3][col]
    }
}

/// `B = |tr(I M)|`.
pub fn chsh_value(m: &StochasticMatrix4) -> f64 {
    let mut trace = 0.0;
    for (i, kernel_row) in CHSH_KERNEL.iter().enumerate() {
        for (k, sign) in kernel_row.iter().enumerate() {
            trace += sign * m.get(k, i);
        }
    }
    trace.abs()
}

fn check_spins(rho: &DensityMatrix, spins: (SpinJ, SpinJ)) -> Result<BipartiteDims> {
    let dims = BipartiteDims::new(spins.0.dim(), spins.1.dim())?;
    dims.check(rho.dim())?;
    Ok(dims)
}

/// Stochastic matrix of the two-qubit portraits of the local spin tomograms
/// at the four CHSH setting pairs.
pub fn build_stochastic_matrix(
    rho: &DensityMatrix,
    spins: (SpinJ, SpinJ),
    settings: &BellSettings,
    parts: (&Partition, &Partition),
) -> Result<StochasticMatrix4> {
    let dims = check_spins(rho, spins)?;
    if parts.0.d() != dims.d1 || parts.1.d() != dims.d2 {
        return Err(Error::DimensionMismatch(format!(
            "partitions cover {}x{} outcomes, subsystems are {}x{}",
            parts.0.d(),
            parts.1.d(),
            dims.d1,
            dims.d2
        )));
    }
    let (j1, j2) = spins;
    let cond_a = ConditionedState::new(rho, dims, &wigner_d(j1, &settings.a))?;
    let cond_d = ConditionedState::new(rho, dims, &wigner_d(j1, &settings.d))?;
    let rot_b = wigner_d(j2, &settings.b);
    let rot_c = wigner_d(j2, &settings.c);
    let portrait = |cond: &ConditionedState, rot| -> Result<JointTomogram> {
        two_qubit_portrait(&cond.joint(rot)?, parts.0, parts.1)
    };
    let ab = portrait(&cond_a, &rot_b)?;
    let ac = portrait(&cond_a, &rot_c)?;
    let db = portrait(&cond_d, &rot_b)?;
    let dc = portrait(&cond_d, &rot_c)?;
    StochasticMatrix4::from_columns([&ab, &ac, &db, &dc])
}

/// `P[A = B + k] = sum_j w(j + k mod 3, j)` for a 3x3 joint tomogram.
pub fn equality_probability(jt: &JointTomogram, k: i32) -> Result<f64> {
    if jt.rows() != 3 || jt.cols() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "equality probability needs a 3x3 joint tomogram, got {}x{}",
            jt.rows(),
            jt.cols()
        )));
    }
    let shift = k.rem_euclid(3) as usize;
    Ok((0..3).map(|j| jt.get((j + shift) % 3, j)).sum())
}

/// Two-qutrit `I3` functional with spin-1 rotations for all four settings.
pub fn i3_value(rho: &DensityMatrix, settings: &BellSettings) -> Result<f64> {
    let dims = check_spins(rho, (SpinJ::ONE, SpinJ::ONE))?;
    let cond_a = ConditionedState::new(rho, dims, &wigner_d(SpinJ::ONE, &settings.a))?;
    let cond_c = ConditionedState::new(rho, dims, &wigner_d(SpinJ::ONE, &settings.c))?;
    let rot_b = wigner_d(SpinJ::ONE, &settings.b);
    let rot_d = wigner_d(SpinJ::ONE, &settings.d);
    let ab = cond_a.joint(&rot_b)?;
    let cb = cond_c.joint(&rot_b)?;
    let cd = cond_c.joint(&rot_d)?;
    let ad = cond_a.joint(&rot_d)?;
    let p = equality_probability;
    let positive = p(&ab, 0)? + p(&cb, -1)? + p(&cd, 0)? + p(&ad, 0)?;
    let negative = p(&ab, -1)? + p(&cb, 0)? + p(&cd, -1)? + p(&ad, 1)?;
    Ok(positive - negative)
}

/// A Bell functional evaluated at specific settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BellEvaluation {
    pub value: f64,
    pub settings: BellSettings,
    /// Portrait partitions; `None` for `I3`.
    pub partitions: Option<(Partition, Partition)>,
    pub functional: Functional,
}

impl BellEvaluation {
    pub fn violates_classical_bound(&self, margin: f64) -> bool {
        self.value > CLASSICAL_BOUND + margin
    }
}

/// Evaluates CHSH (with the given partitions) or `I3`.
pub fn evaluate(
    functional: Functional,
    rho: &DensityMatrix,
    spins: (SpinJ, SpinJ),
    settings: &BellSettings,
    parts: Option<(&Partition, &Partition)>,
) -> Result<BellEvaluation> {
    let (value, partitions) = match functional {
        Functional::Chsh => {
            let parts = parts.ok_or_else(|| {
                Error::InvalidArgument("CHSH evaluation needs a partition pair".into())
            })?;
            let m = build_stochastic_matrix(rho, spins, settings, parts)?;
            (chsh_value(&m), Some((parts.0.clone(), parts.1.clone())))
        }
        Functional::I3 => {
            if spins != (SpinJ::ONE, SpinJ::ONE) {
                return Err(Error::InvalidArgument("I3 is defined for two qutrits".into()));
            }
            (i3_value(rho, settings)?, None)
        }
    };
    Ok(BellEvaluation {
        value,
        settings: *settings,
        partitions,
        functional,
    })
}
