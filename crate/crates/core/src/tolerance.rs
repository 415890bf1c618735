//! Numerical tolerances shared by every module.

/// Tolerance constants used for validation and convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max abs entry of `H - H^†` accepted as Hermitian.
    pub hermitian: f64,
    /// Max abs entry of `U^† U - I` accepted as unitary.
    pub unitary: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub trace: f64,
    /// Smallest eigenvalue accepted as positive semidefinite is `-psd`.
    pub psd: f64,
    /// Roundoff negativity clamped to zero in probability vectors.
    pub probability_clamp: f64,
    /// Allowed deviation of a probability vector sum from 1.
    pub probability_sum: f64,
    /// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
    pub jacobi_off_diagonal: f64,
    /// Series truncation threshold for the matrix exponential.
    pub exp_series_term: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}

/// The default tolerances.
pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-10,
    unitary: 1e-10,
    trace: 1e-10,
    psd: 1e-10,
    probability_clamp: 1e-12,
    probability_sum: 1e-10,
    jacobi_off_diagonal: 1e-13,
    exp_series_term: 1e-16,
};
