//! Qubit-portraits: coarse-graining a `d`-outcome tomogram into a dichotomic
//! one by summing probabilities over the two blocks of an outcome bipartition.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tomography::{JointTomogram, OutcomeValues, Tomogram};

/// Split of the outcomes `{0, .., d-1}` into two nonempty blocks.
///
/// Block 0 is read as outcome `+1` and block 1 as `-1`. The canonical form
/// keeps outcome 0 in block 0; [`Partition::swapped`] gives the relabelled,
/// non-canonical twin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    d: usize,
    block0: Vec<usize>,
    block1: Vec<usize>,
}

impl Partition {
    /// Partition with `block0` as given and the complement as block 1.
    pub fn new(d: usize, block0: &[usize]) -> Result<Self> {
        let mut in_block0 = vec![false; d];
        for &m in block0 {
            if m >= d {
                return Err(Error::InvalidArgument(format!(
                    "outcome {m} out of range for d = {d}"
                )));
            }
            if in_block0[m] {
                return Err(Error::InvalidArgument(format!("outcome {m} listed twice")));
            }
            in_block0[m] = true;
        }
        let (b0, b1): (Vec<usize>, Vec<usize>) = (0..d).partition(|&m| in_block0[m]);
        if b0.is_empty() || b1.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "both blocks must be nonempty (d = {d}, block0 = {block0:?})"
            )));
        }
        Ok(Self {
            d,
            block0: b0,
            block1: b1,
        })
    }

    /// The trivial partition `{0} | {1}` of a qubit.
    pub fn qubit() -> Self {
        Self {
            d: 2,
            block0: vec![0],
            block1: vec![1],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block0(&self) -> &[usize] {
        &self.block0
    }

    pub fn block1(&self) -> &[usize] {
        &self.block1
    }

    pub fn is_canonical(&self) -> bool {
        self.block0.first() == Some(&0)
    }

    /// Same split with the block labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            d: self.d,
            block0: self.block1.clone(),
            block1: self.block0.clone(),
        }
    }

    /// Block (0 or 1) containing outcome `m`.
    pub fn block_of(&self, m: usize) -> usize {
        if self.block0.contains(&m) {
            0
        } else {
            1
        }
    }

    /// Dichotomic values per outcome: `+1` on block 0, `-1` on block 1.
    pub fn signs(&self) -> OutcomeValues {
        OutcomeValues(
            (0..self.d)
                .map(|m| if self.block_of(m) == 0 { 1.0 } else { -1.0 })
                .collect(),
        )
    }
}

impl fmt::Display for Partition {
    /// Digits of block 0, `|`, digits of block 1, e.g. `01|2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.block0 {
            write!(f, "{m}")?;
        }
        f.write_str("|")?;
        for m in &self.block1 {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed partition '{s}'"));
        let (left, right) = s.split_once('|').ok_or_else(bad)?;
        let digits = |part: &str| -> Result<Vec<usize>> {
            part.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect()
        };
        let b0 = digits(left)?;
        let b1 = digits(right)?;
        let d = b0.len() + b1.len();
        let p = Partition::new(d, &b0)?;
        let mut sorted = b1.clone();
        sorted.sort_unstable();
        if p.block1 != sorted {
            return Err(bad());
        }
        Ok(p)
    }
}

/// All canonical bipartitions of `d` outcomes, ordered lexicographically by
/// block 0. There are `2^(d-1) - 1` of them.
pub fn enumerate_bipartitions(d: usize) -> Result<Vec<Partition>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "bipartitions need at least 2 outcomes, got {d}"
        )));
    }
    if d > 20 {
        return Err(Error::InvalidArgument(format!("too many outcomes to enumerate: {d}")));
    }
    // outcome 0 always sits in block 0; the other d-1 outcomes are free,
    // except that they cannot all join it
    let mut parts: Vec<Partition> = (0u32..(1 << (d - 1)) - 1)
        .map(|mask| {
            let block0: Vec<usize> = std::iter::once(0)
                .chain((1..d).filter(|&m| mask & (1 << (m - 1)) != 0))
                .collect();
            Partition::new(d, &block0).expect("valid by construction")
        })
        .collect();
    parts.sort_by(|a, b| a.block0.cmp(&b.block0));
    Ok(parts)
}

/// `w'(b) = sum_{m in block b} w(m)`.
pub fn qubit_portrait(t: &Tomogram, part: &Partition) -> Result<Tomogram> {
    if t.len() != part.d {
        return Err(Error::DimensionMismatch(format!(
            "tomogram has {} outcomes, partition covers {}",
            t.len(),
            part.d
        )));
    }
    let p = t.probs();
    let p0: f64 = part.block0.iter().map(|&m| p[m]).sum();
    let p1: f64 = part.block1.iter().map(|&m| p[m]).sum();
    Tomogram::new(vec![p0, p1])
}

/// Two-qubit portrait `w'(b1, b2)` of a joint tomogram.
pub fn two_qubit_portrait(
    jt: &JointTomogram,
    part1: &Partition,
    part2: &Partition,
) -> Result<JointTomogram> {
    if jt.rows() != part1.d || jt.cols() != part2.d {
        return Err(Error::DimensionMismatch(format!(
            "joint tomogram is {}x{}, partitions cover {}x{}",
            jt.rows(),
            jt.cols(),
            part1.d,
            part2.d
        )));
    }
    let mut out = [0.0; 4];
    for m1 in 0..jt.rows() {
        let b1 = part1.block_of(m1);
        for m2 in 0..jt.cols() {
            out[2 * b1 + part2.block_of(m2)] += jt.get(m1, m2);
        }
    }
    JointTomogram::new(2, 2, out.to_vec())
}
