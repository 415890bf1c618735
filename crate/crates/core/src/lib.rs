//! Tomographic probability representation of finite-dimensional quantum
//! states and Bell-functional maximization on top of it.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products and a cyclic
//!   Jacobi Hermitian eigen-solver.
//! - [`wigner`]: Jacobi polynomials and Wigner rotation matrices for any spin.
//! - [`states`]: density matrices, Werner and isotropic families, purity.
//! - [`tomography`]: unitary, spin and local spin tomograms.
//! - [`portrait`]: qubit-portraits, i.e. dichotomic coarse-grainings of
//!   qudit tomograms over a bipartition of the outcome set.
//! - [`bell`]: the CHSH stochastic matrix and the two-qutrit `I3` functional.
//! - [`optimizer`]: multistart Nelder-Mead maximization and threshold
//!   bisection.
//!
//! Conventions: in a tensor product the first factor is the slow index, and
//! outcome index 0 corresponds to the largest spin projection `m = +j`.

#![forbid(unsafe_code)]

pub mod bell;
pub mod error;
pub mod matrix;
pub mod optimizer;
pub mod portrait;
pub mod states;
pub mod tolerance;
pub mod tomography;
pub mod wigner;

pub use error::{Error, Result};
pub use matrix::{c64, ComplexMatrix};
