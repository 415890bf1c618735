//! Unitary, spin and local spin tomograms.
//!
//! A tomogram `w(m, u) = <m| u^† rho u |m>` is the outcome distribution of a
//! projective measurement in the rotated basis `u|m>`. For bipartite states
//! the local tomogram uses `u_1 (x) u_2`.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::states::{BipartiteDims, DensityMatrix};
use crate::tolerance::TOL;
use crate::wigner::{wigner_d, MeasurementDirection, SpinJ};

fn validate_probabilities(probs: &mut [f64]) -> Result<()> {
    for p in probs.iter_mut() {
        if !p.is_finite() || *p < -TOL.probability_clamp || *p > 1.0 + TOL.probability_clamp {
            return Err(Error::Invariant {
                invariant: "probability range",
                detail: format!("entry {p} outside [0, 1]"),
            });
        }
        *p = p.clamp(0.0, 1.0);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TOL.probability_sum {
        return Err(Error::Invariant {
            invariant: "normalization",
            detail: format!("probabilities sum to {total}"),
        });
    }
    Ok(())
}

/// Outcome distribution of a single measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Tomogram {
    probs: Vec<f64>,
}

impl Tomogram {
    /// Validates and clamps roundoff negativity to zero.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty tomogram".into()));
        }
        validate_probabilities(&mut probs)?;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Joint outcome distribution of two local measurements, row index `m1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTomogram {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointTomogram {
    /// Row-major `rows x cols` distribution; validated and clamped.
    pub fn new(rows: usize, cols: usize, mut probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || probs.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} joint tomogram needs {} entries, got {}",
                rows * cols,
                probs.len()
            )));
        }
        validate_probabilities(&mut probs)?;
        Ok(Self { rows, cols, probs })
    }

    /// Product distribution `p1(m1) p2(m2)`.
    pub fn product(first: &Tomogram, second: &Tomogram) -> Self {
        let probs = first
            .probs
            .iter()
            .flat_map(|a| second.probs.iter().map(move |b| a * b))
            .collect();
        Self {
            rows: first.len(),
            cols: second.len(),
            probs,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, m1: usize, m2: usize) -> f64 {
        self.probs[m1 * self.cols + m2]
    }

    /// Row-major entries.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Distribution of the first outcome.
    pub fn marginal_first(&self) -> Tomogram {
        Tomogram {
            probs: (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c)).sum())
                .collect(),
        }
    }

    /// Distribution of the second outcome.
    pub fn marginal_second(&self) -> Tomogram {
        Tomogram {
            probs: (0..self.cols)
                .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
                .collect(),
        }
    }
}

/// Eigenvalues `x_m` assigned to measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeValues(pub Vec<f64>);

impl OutcomeValues {
    /// `(+1, -1)`, matching index order `m = +1/2, -1/2`.
    pub fn dichotomic() -> Self {
        Self(vec![1.0, -1.0])
    }

    /// Spin projections `m` for spin `j`, index 0 first.
    pub fn spin_projections(j: SpinJ) -> Self {
        Self(j.projections())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn require_unitary(u: &ComplexMatrix) -> Result<()> {
    let err = u.unitarity_error();
    if err > TOL.unitary {
        return Err(Error::InvalidArgument(format!(
            "measurement matrix is not unitary (max |U^dag U - I| = {err:e})"
        )));
    }
    Ok(())
}

/// `w(m, u) = <m| u^† rho u |m>`.
pub fn unitary_tomogram(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<Tomogram> {
    if u.rows() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{}, state has dimension {}",
            u.rows(),
            u.cols(),
            rho.dim()
        )));
    }
    require_unitary(u)?;
    let r = rho.matrix();
    let n = rho.dim();
    let probs = (0..n)
        .map(|m| {
            let mut acc = c64::new(0.0, 0.0);
            for i in 0..n {
                let ui = u[(i, m)].conj();
                for j in 0..n {
                    acc += ui * r[(i, j)] * u[(j, m)];
                }
            }
            acc.re
        })
        .collect();
    Tomogram::new(probs)
}

/// Spin tomogram along `dir`; independent of `dir.gamma()`.
pub fn spin_tomogram(rho: &DensityMatrix, j: SpinJ, dir: &MeasurementDirection) -> Result<Tomogram> {
    if rho.dim() != j.dim() {
        return Err(Error::DimensionMismatch(format!(
            "spin {}/2 needs dimension {}, state has {}",
            j.two_j(),
            j.dim(),
            rho.dim()
        )));
    }
    unitary_tomogram(rho, &wigner_d(j, dir))
}

/// A bipartite state conditioned on each outcome of a fixed first-side
/// measurement.
///
/// Entry `m1` holds the unnormalized operator
/// `sigma_{m1} = tr_1[(u1|m1><m1|u1^† (x) I) rho]` on the second subsystem, so
/// `w(m1, m2) = <m2| u2^† sigma_{m1} u2 |m2>`. Building it once lets several
/// second-side settings share the first-side work.
#[derive(Debug, Clone)]
pub struct ConditionedState {
    d2: usize,
    // row-major d2 x d2 blocks, one per first-side outcome
    blocks: Vec<Vec<c64>>,
}

impl ConditionedState {
    pub fn new(rho: &DensityMatrix, dims: BipartiteDims, u1: &ComplexMatrix) -> Result<Self> {
        dims.check(rho.dim())?;
        if u1.rows() != dims.d1 {
            return Err(Error::DimensionMismatch(format!(
                "first-side unitary is {}x{}, subsystem has dimension {}",
                u1.rows(),
                u1.cols(),
                dims.d1
            )));
        }
        require_unitary(u1)?;
        let (d1, d2) = (dims.d1, dims.d2);
        let r = rho.matrix();
        let blocks = (0..d1)
            .map(|m1| {
                let mut block = vec![c64::new(0.0, 0.0); d2 * d2];
                for i in 0..d1 {
                    let ui = u1[(i, m1)].conj();
                    for j in 0..d1 {
                        let w = ui * u1[(j, m1)];
                        if w.norm_sqr() == 0.0 {
                            continue;
                        }
                        for k in 0..d2 {
                            for l in 0..d2 {
                                block[k * d2 + l] += w * r[(i * d2 + k, j * d2 + l)];
                            }
                        }
                    }
                }
                block
            })
            .collect();
        Ok(Self { d2, blocks })
    }

    /// Joint tomogram for the second-side unitary `u2`.
    pub fn joint(&self, u2: &ComplexMatrix) -> Result<JointTomogram> {
        let d2 = self.d2;
        if u2.rows() != d2 {
            return Err(Error::DimensionMismatch(format!(
                "second-side unitary is {}x{}, subsystem has dimension {d2}",
                u2.rows(),
                u2.cols()
            )));
        }
        require_unitary(u2)?;
        let mut probs = Vec::with_capacity(self.blocks.len() * d2);
        for block in &self.blocks {
            for m2 in 0..d2 {
                let mut acc = c64::new(0.0, 0.0);
                for k in 0..d2 {
                    let uk = u2[(k, m2)].conj();
                    let mut row = c64::new(0.0, 0.0);
                    for l in 0..d2 {
                        row += block[k * d2 + l] * u2[(l, m2)];
                    }
                    acc += uk * row;
                }
                probs.push(acc.re);
            }
        }
        JointTomogram::new(self.blocks.len(), d2, probs)
    }
}

/// `w(m1, m2) = <m1 m2| (u1 (x) u2)^† rho (u1 (x) u2) |m1 m2>`.
pub fn local_unitary_tomogram(
    rho: &DensityMatrix,
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
) -> Result<JointTomogram> {
    let dims = BipartiteDims::new(u1.rows(), u2.rows())?;
    ConditionedState::new(rho, dims, u1)?.joint(u2)
}

/// Local spin tomogram for polarization directions `dir1`, `dir2`.
pub fn local_spin_tomogram(
    rho: &DensityMatrix,
    spins: (SpinJ, SpinJ),
    dir1: &MeasurementDirection,
    dir2: &MeasurementDirection,
) -> Result<JointTomogram> {
    let dims = BipartiteDims::new(spins.0.dim(), spins.1.dim())?;
    dims.check(rho.dim())?;
    local_unitary_tomogram(rho, &wigner_d(spins.0, dir1), &wigner_d(spins.1, dir2))
}

/// `<X> = sum_m x_m w(m)`.
pub fn tomogram_expectation(t: &Tomogram, x: &OutcomeValues) -> Result<f64> {
    if t.len() != x.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outcome values for a tomogram with {} outcomes",
            x.0.len(),
            t.len()
        )));
    }
    Ok(t.probs.iter().zip(&x.0).map(|(p, v)| p * v).sum())
}

/// `C = sum_{m1 m2} x1_{m1} x2_{m2} w(m1, m2)`.
pub fn correlation(jt: &JointTomogram, x1: &OutcomeValues, x2: &OutcomeValues) -> Result<f64> {
    if jt.rows != x1.0.len() || jt.cols != x2.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "outcome values of length {} and {} for a {}x{} joint tomogram",
            x1.0.len(),
            x2.0.len(),
            jt.rows,
            jt.cols
        )));
    }
    let mut acc = 0.0;
    for (m1, a) in x1.0.iter().enumerate() {
        for (m2, b) in x2.0.iter().enumerate() {
            acc += a * b * jt.get(m1, m2);
        }
    }
    Ok(acc)
}
