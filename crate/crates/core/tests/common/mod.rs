#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use tomobell_core::matrix::exp_antihermitian;
use tomobell_core::states::DensityMatrix;
use tomobell_core::wigner::MeasurementDirection;
use tomobell_core::{c64, ComplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    g.add(&g.adjoint()).unwrap().scale_real(0.5)
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n);
    exp_antihermitian(&h.scale(c64::new(0.0, -2.0))).unwrap()
}

/// `G G^† / tr(G G^†)` for a random complex `G`: full rank, generic.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let g = random_matrix(rng, n, n);
    let m = g.multiply(&g.adjoint()).unwrap();
    let tr = m.trace().unwrap().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
}

pub fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let v: Vec<c64> = (0..n)
        .map(|_| c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    DensityMatrix::pure(&v.iter().map(|z| z / norm).collect::<Vec<_>>()).unwrap()
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> MeasurementDirection {
    MeasurementDirection::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
}

pub fn random_angles(rng: &mut ChaCha8Rng) -> [f64; 8] {
    let mut x = [0.0; 8];
    for pair in x.chunks_exact_mut(2) {
        pair[0] = rng.gen_range(0.0..PI);
        pair[1] = rng.gen_range(0.0..TAU);
    }
    x
}
