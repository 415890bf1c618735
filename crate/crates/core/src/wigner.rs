//! Wigner rotation matrices for arbitrary spin.
//!
//! Spin and magnetic quantum numbers are stored doubled (`two_j`, `two_m`) so
//! half-integers stay exact. Matrix index 0 corresponds to `m = +j` and index
//! `2j` to `m = -j`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

/// Spin quantum number `j = two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinJ {
    two_j: u32,
}

impl SpinJ {
    pub const HALF: SpinJ = SpinJ { two_j: 1 };
    pub const ONE: SpinJ = SpinJ { two_j: 2 };

    pub fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    /// Spin whose representation has dimension `d`.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self {
            two_j: (d - 1) as u32,
        })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// Doubled projection `2m` carried by matrix index `index`.
    pub fn two_m_at(self, index: usize) -> i32 {
        self.two_j as i32 - 2 * index as i32
    }

    /// Spin projections `m` in index order, from `+j` down to `-j`.
    pub fn projections(self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| f64::from(self.two_m_at(i)) / 2.0)
            .collect()
    }
}

/// Euler angles `(theta, phi, gamma)` of a rotated measurement basis.
///
/// Construction normalises `theta` into `[0, pi]` and `phi`, `gamma` into
/// `[0, 2pi)`. When `theta` is reflected, `phi` is shifted by `pi` so the
/// polarization axis [`Self::unit_vector`] is unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
    gamma: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64, gamma: f64) -> Self {
        let (theta, phi) = wrap_polar(theta, phi);
        Self {
            theta,
            phi,
            gamma: wrap_angle(gamma),
        }
    }

    /// Direction with `gamma = 0`.
    pub fn polar(theta: f64, phi: f64) -> Self {
        Self::new(theta, phi, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self::new(self.theta, self.phi, gamma)
    }

    /// The polarization axis `(sin t cos p, sin t sin p, cos t)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

impl Default for MeasurementDirection {
    fn default() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Maps a polar pair onto `theta in [0, pi]`, `phi in [0, 2pi)` without
/// changing the point on the sphere.
pub fn wrap_polar(theta: f64, phi: f64) -> (f64, f64) {
    let t = wrap_angle(theta);
    if t > PI {
        (TAU - t, wrap_angle(phi + PI))
    } else {
        (t, wrap_angle(phi))
    }
}

/// Jacobi polynomial `P_n^(alpha, beta)(x)` by the three-term recurrence.
pub fn jacobi_polynomial(n: i64, alpha: i64, beta: i64, x: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi polynomial degree must be nonnegative, got {n}"
        )));
    }
    if alpha < 0 || beta < 0 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi parameters must be nonnegative, got ({alpha}, {beta})"
        )));
    }
    let (a, b) = (alpha as f64, beta as f64);
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let lead = 2.0 * k * (k + a + b) * (s - 2.0);
        let next = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * cur
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * prev)
            / lead;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn factorial(n: i32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// Wigner small-d element `d^j_{m_row, m_col}(theta)` with doubled
/// projections `two_m_row`, `two_m_col`.
///
/// The closed Jacobi form is only evaluated where both half-angle exponents
/// `m_col - m_row` and `m_col + m_row` are nonnegative; every other element
/// follows from `d_{m'm} = (-1)^{m-m'} d_{mm'} = d_{-m,-m'}`.
pub fn wigner_small_d(j: SpinJ, two_m_row: i32, two_m_col: i32, theta: f64) -> Result<f64> {
    let two_j = j.two_j as i32;
    for two_m in [two_m_row, two_m_col] {
        if two_m.abs() > two_j || (two_j - two_m) % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "projection {}/2 is not valid for spin {}/2",
                two_m, two_j
            )));
        }
    }
    let diff = two_m_col - two_m_row;
    let sum = two_m_col + two_m_row;
    // sign (-1)^(m - m') for the transposition symmetry
    let transpose_sign = if (diff / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(match (diff >= 0, sum >= 0) {
        (true, true) => small_d_canonical(two_j, two_m_row, two_m_col, theta),
        (false, true) => transpose_sign * small_d_canonical(two_j, two_m_col, two_m_row, theta),
        (true, false) => small_d_canonical(two_j, -two_m_col, -two_m_row, theta),
        (false, false) => transpose_sign * small_d_canonical(two_j, -two_m_row, -two_m_col, theta),
    })
}

// Requires two_m_col >= |two_m_row|.
fn small_d_canonical(two_j: i32, two_m_row: i32, two_m_col: i32, theta: f64) -> f64 {
    let jpm = (two_j + two_m_col) / 2;
    let jmm = (two_j - two_m_col) / 2;
    let jpm_row = (two_j + two_m_row) / 2;
    let jmm_row = (two_j - two_m_row) / 2;
    let prefactor =
        (factorial(jpm) * factorial(jmm) / (factorial(jpm_row) * factorial(jmm_row))).sqrt();
    let sin_exp = (two_m_col - two_m_row) / 2;
    let cos_exp = (two_m_col + two_m_row) / 2;
    let (s, c) = (theta / 2.0).sin_cos();
    let p = jacobi_polynomial(jmm as i64, sin_exp as i64, cos_exp as i64, theta.cos())
        .expect("canonical region has nonnegative indices");
    prefactor * s.powi(sin_exp) * c.powi(cos_exp) * p
}

/// Full `(2j+1) x (2j+1)` real matrix `d^j(theta)` in index order.
pub fn wigner_small_d_matrix(j: SpinJ, theta: f64) -> ComplexMatrix {
    let d = j.dim();
    ComplexMatrix::from_fn(d, d, |r, c| {
        let v = wigner_small_d(j, j.two_m_at(r), j.two_m_at(c), theta).expect("valid indices");
        c64::new(v, 0.0)
    })
}

/// Rotation matrix `<m'|D|m> = e^{-i m' phi} d^j_{m'm}(theta) e^{-i m gamma}`.
pub fn wigner_d(j: SpinJ, dir: &MeasurementDirection) -> ComplexMatrix {
    let small = wigner_small_d_matrix(j, dir.theta);
    let phases_phi: Vec<c64> = (0..j.dim())
        .map(|i| c64::from_polar(1.0, -f64::from(j.two_m_at(i)) / 2.0 * dir.phi))
        .collect();
    let phases_gamma: Vec<c64> = (0..j.dim())
        .map(|i| c64::from_polar(1.0, -f64::from(j.two_m_at(i)) / 2.0 * dir.gamma))
        .collect();
    ComplexMatrix::from_fn(j.dim(), j.dim(), |r, c| {
        phases_phi[r] * small[(r, c)] * phases_gamma[c]
    })
}

/// Spin operator `J_y = (J+ - J-) / 2i` in the index convention above.
///
/// Used as a reference for the closed-form rotation matrices.
pub fn spin_operator_y(j: SpinJ) -> ComplexMatrix {
    let d = j.dim();
    let jj = j.j() * (j.j() + 1.0);
    let mut raise = ComplexMatrix::zeros(d, d);
    for col in 1..d {
        let m = f64::from(j.two_m_at(col)) / 2.0;
        raise[(col - 1, col)] = c64::new((jj - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    raise
        .sub(&lower)
        .expect("same shape")
        .scale(c64::new(0.0, -0.5))
}
