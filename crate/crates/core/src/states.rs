//! Density matrices and the Werner and isotropic state families.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{c64, hermitian_eigenvalues, ComplexMatrix};
use crate::tolerance::TOL;

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub const HERMITIAN: &'static str = "Hermitian";
    pub const UNIT_TRACE: &'static str = "unit trace";
    pub const POSITIVE: &'static str = "positive semidefinite";

    /// Validates `matrix` against the three state invariants, in the order
    /// square/Hermitian, unit trace, positive semidefinite.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invariant {
                invariant: Self::HERMITIAN,
                detail: format!("matrix is {}x{}, not square", matrix.rows(), matrix.cols()),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > TOL.hermitian {
            return Err(Error::Invariant {
                invariant: Self::HERMITIAN,
                detail: format!("max |rho - rho^dag| = {herm:e}"),
            });
        }
        let trace = matrix.trace()?;
        if (trace - c64::new(1.0, 0.0)).norm() > TOL.trace {
            return Err(Error::Invariant {
                invariant: Self::UNIT_TRACE,
                detail: format!("trace is {}", trace.re),
            });
        }
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < -TOL.psd {
            return Err(Error::Invariant {
                invariant: Self::POSITIVE,
                detail: format!("smallest eigenvalue is {min_eig:e}"),
            });
        }
        Ok(Self { matrix })
    }

    /// Pure state `|v><v|` of a normalized vector.
    pub fn pure(v: &[c64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let normalized: Vec<c64> = v.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&normalized))
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Computational basis state `|index><index|`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = c64::new(1.0, 0.0);
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `rho_1 (x) rho_2`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
        }
    }

    /// Convex combination `sum_k w_k rho_k`; weights must be nonnegative and
    /// sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TOL.trace {
            return Err(Error::InvalidArgument(
                "mixture weights must be nonnegative and sum to 1".into(),
            ));
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            acc = acc.add(&rho.matrix.scale_real(*w))?;
        }
        Self::new(acc)
    }

    /// Partial trace over the second factor of a `d1 x d2` bipartition.
    pub fn partial_trace_second(&self, dims: BipartiteDims) -> Result<Self> {
        dims.check(self.dim())?;
        let (d1, d2) = (dims.d1, dims.d2);
        let m = ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| self.matrix[(i * d2 + k, j * d2 + k)]).sum()
        });
        Ok(Self { matrix: m })
    }

    /// Partial trace over the first factor.
    pub fn partial_trace_first(&self, dims: BipartiteDims) -> Result<Self> {
        dims.check(self.dim())?;
        let (d1, d2) = (dims.d1, dims.d2);
        let m = ComplexMatrix::from_fn(d2, d2, |k, l| {
            (0..d1).map(|i| self.matrix[(i * d2 + k, i * d2 + l)]).sum()
        });
        Ok(Self { matrix: m })
    }
}

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    pub d1: usize,
    pub d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimensions must be positive, got {d1}x{d2}"
            )));
        }
        Ok(Self { d1, d2 })
    }

    /// Two subsystems of equal dimension `d`.
    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.total() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "subsystems {}x{} do not match state dimension {dim}",
                self.d1, self.d2
            )))
        }
    }
}

/// Swap operator on `C^d (x) C^d`, `V|i>|j> = |j>|i>`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = c64::new(1.0, 0.0);
        }
    }
    v
}

/// `d^{-1/2} sum_i |ii>`.
pub fn max_entangled(d: usize) -> Vec<c64> {
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![c64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = c64::new(amp, 0.0);
    }
    v
}

fn require_local_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "local dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// Coefficients `(a, b)` of the Werner state `W = a I + b V`.
pub fn werner_coefficients(d: usize, f: f64) -> (f64, f64) {
    let d = d as f64;
    let norm = d * d * d - d;
    ((d - f) / norm, (d * f - 1.0) / norm)
}

/// Werner state `((d - f) I + (d f - 1) V) / (d^3 - d)` with
/// `f = tr(W V) in [-1, 1]`.
pub fn werner_state(d: usize, f: f64) -> Result<DensityMatrix> {
    require_local_dim(d)?;
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::OutOfDomain(format!(
            "Werner parameter must lie in [-1, 1], got {f}"
        )));
    }
    let (a, b) = werner_coefficients(d, f);
    let m = ComplexMatrix::identity(d * d)
        .scale_real(a)
        .add(&flip_operator(d).scale_real(b))?;
    DensityMatrix::new(m)
}

/// Coefficients `(a, b)` of the isotropic state `S = a I + b |psi><psi|`.
pub fn isotropic_coefficients(d: usize, p: f64) -> (f64, f64) {
    let d2 = (d * d) as f64;
    ((1.0 - p) / (d2 - 1.0), (p * d2 - 1.0) / (d2 - 1.0))
}

/// Isotropic state `((1 - p) I + (p d^2 - 1) |psi><psi|) / (d^2 - 1)` with
/// fidelity `<psi|S|psi> = p in [0, 1]`.
pub fn isotropic_state(d: usize, p: f64) -> Result<DensityMatrix> {
    require_local_dim(d)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain(format!(
            "isotropic parameter must lie in [0, 1], got {p}"
        )));
    }
    let (a, b) = isotropic_coefficients(d, p);
    let m = ComplexMatrix::identity(d * d)
        .scale_real(a)
        .add(&ComplexMatrix::projector(&max_entangled(d)).scale_real(b))?;
    DensityMatrix::new(m)
}

/// `tr rho^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// One-parameter state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    Werner,
    Isotropic,
}

impl StateFamily {
    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Werner => "werner",
            StateFamily::Isotropic => "isotropic",
        }
    }

    /// Conventional symbol of the family parameter.
    pub fn parameter_symbol(self) -> &'static str {
        match self {
            StateFamily::Werner => "phi",
            StateFamily::Isotropic => "p",
        }
    }

    /// Allowed parameter interval.
    pub fn domain(self) -> (f64, f64) {
        match self {
            StateFamily::Werner => (-1.0, 1.0),
            StateFamily::Isotropic => (0.0, 1.0),
        }
    }

    pub fn state(self, d: usize, param: f64) -> Result<DensityMatrix> {
        match self {
            StateFamily::Werner => werner_state(d, param),
            StateFamily::Isotropic => isotropic_state(d, param),
        }
    }

    /// Closed-form purity of the family member.
    pub fn purity(self, d: usize, param: f64) -> f64 {
        let df = d as f64;
        match self {
            StateFamily::Werner => {
                // tr I = d^2, tr V = d, V^2 = I
                let (a, b) = werner_coefficients(d, param);
                a * a * df * df + 2.0 * a * b * df + b * b * df * df
            }
            StateFamily::Isotropic => {
                let (a, b) = isotropic_coefficients(d, param);
                a * a * df * df + 2.0 * a * b + b * b
            }
        }
    }

    /// Whether the family member is separable.
    pub fn is_separable(self, d: usize, param: f64) -> bool {
        let t = separability_threshold(self, d);
        match self {
            StateFamily::Werner => param >= t,
            StateFamily::Isotropic => param <= t,
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "werner" => Ok(StateFamily::Werner),
            "isotropic" => Ok(StateFamily::Isotropic),
            other => Err(Error::InvalidArgument(format!("unknown state family '{other}'"))),
        }
    }
}

/// Boundary of the separable region: Werner states are separable for
/// `f >= 0`, isotropic states for `p <= 1/d`.
pub fn separability_threshold(family: StateFamily, d: usize) -> f64 {
    match family {
        StateFamily::Werner => 0.0,
        StateFamily::Isotropic => 1.0 / d as f64,
    }
}

/// Converts the two-qutrit isotropic parameter to `q = (9p - 1) / 8`.
///
/// `q` is the weight in `q |psi><psi| + (1 - q) I / 9`, the quantity reported
/// as the singlet fraction for qutrit pairs. The fidelity with `|psi>` is `p`
/// itself.
pub fn isotropic_param_to_singlet_fraction(p: f64) -> Result<f64> {
    if !(1.0 / 9.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain(format!(
            "singlet fraction needs p in [1/9, 1], got {p}"
        )));
    }
    Ok((9.0 * p - 1.0) / 8.0)
}

/// Writes a state in the text format read by [`parse_density_matrix`].
pub fn format_density_matrix(rho: &DensityMatrix, dims: BipartiteDims) -> Result<String> {
    dims.check(rho.dim())?;
    let mut out = format!("dim {} {}\n", dims.d1, dims.d2);
    for z in rho.matrix().as_slice() {
        writeln!(out, "{:.17e} {:.17e}", z.re, z.im).expect("write to string");
    }
    Ok(out)
}

/// Parses the density-matrix text format: a header `dim <d1> <d2>` followed
/// by `(d1 d2)^2` lines `<re> <im>` in row-major order. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_density_matrix(text: &str) -> Result<(DensityMatrix, BipartiteDims)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing 'dim <d1> <d2>' header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| -> Result<usize> {
        s.parse::<usize>().ok().filter(|&d| d > 0).ok_or(Error::Parse {
            line: line_no,
            message: format!("invalid dimension '{s}'"),
        })
    };
    if fields.len() != 3 || fields[0] != "dim" {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected 'dim <d1> <d2>', got '{header}'"),
        });
    }
    let dims = BipartiteDims::new(parse_dim(fields[1])?, parse_dim(fields[2])?)?;
    let n = dims.total();

    let mut entries = Vec::with_capacity(n * n);
    for (line_no, line) in lines {
        if entries.len() == n * n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected extra entry, expected {} entries", n * n),
            });
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let value = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number '{s}'"),
            })
        };
        if parts.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected '<re> <im>', got '{line}'"),
            });
        }
        entries.push(c64::new(value(parts[0])?, value(parts[1])?));
    }
    if entries.len() != n * n {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {} entries, found {}", n * n, entries.len()),
        });
    }
    let rho = DensityMatrix::new(ComplexMatrix::new(n, n, entries)?)?;
    Ok((rho, dims))
}
