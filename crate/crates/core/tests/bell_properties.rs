mod common;

use common::{random_angles, random_pure, random_state, rng};
use rand::seq::SliceRandom;
use std::f64::consts::SQRT_2;
use tomobell_core::bell::{build_stochastic_matrix, chsh_value, i3_value, BellSettings, StochasticMatrix4};
use tomobell_core::portrait::{enumerate_bipartitions, qubit_portrait, Partition};
use tomobell_core::states::{isotropic_state, DensityMatrix};
use tomobell_core::tomography::{correlation, local_spin_tomogram, spin_tomogram};
use tomobell_core::wigner::{MeasurementDirection, SpinJ};

/// Random state, spins and partitions on C^d (x) C^d with d in {2, 3}.
fn draw(r: &mut rand_chacha::ChaCha8Rng, k: usize) -> (DensityMatrix, SpinJ, Partition, Partition, BellSettings) {
    let d = 2 + k % 2;
    let parts = enumerate_bipartitions(d).unwrap();
    let p1 = parts.choose(r).unwrap().clone();
    let p2 = parts.choose(r).unwrap().clone();
    let settings = BellSettings::from_angles(&random_angles(r)).unwrap();
    (random_state(r, d * d), SpinJ::from_dim(d).unwrap(), p1, p2, settings)
}

fn pairs(s: &BellSettings) -> [(MeasurementDirection, MeasurementDirection); 4] {
    [(s.a, s.b), (s.a, s.c), (s.d, s.b), (s.d, s.c)]
}

#[test]
fn columns_are_probability_distributions() {
    let mut r = rng(21);
    for k in 0..200 {
        let (rho, j, p1, p2, s) = draw(&mut r, k);
        let m = build_stochastic_matrix(&rho, (j, j), &s, (&p1, &p2)).unwrap();
        for col in 0..4 {
            let sum: f64 = (0..4).map(|row| m.get(row, col)).sum();
            assert!((sum - 1.0).abs() < 1e-10);
            assert!((0..4).all(|row| m.get(row, col) >= 0.0));
        }
    }
}

#[test]
fn product_states_factorize() {
    let mut r = rng(22);
    for k in 0..100 {
        let d = 2 + k % 2;
        let j = SpinJ::from_dim(d).unwrap();
        let parts = enumerate_bipartitions(d).unwrap();
        let (p1, p2) = (parts.choose(&mut r).unwrap(), parts.choose(&mut r).unwrap());
        let (rho1, rho2) = (random_state(&mut r, d), random_state(&mut r, d));
        let s = BellSettings::from_angles(&random_angles(&mut r)).unwrap();
        let m = build_stochastic_matrix(&rho1.tensor(&rho2), (j, j), &s, (p1, p2)).unwrap();
        for (col, (x, y)) in pairs(&s).iter().enumerate() {
            let q1 = qubit_portrait(&spin_tomogram(&rho1, j, x).unwrap(), p1).unwrap();
            let q2 = qubit_portrait(&spin_tomogram(&rho2, j, y).unwrap(), p2).unwrap();
            for b1 in 0..2 {
                for b2 in 0..2 {
                    let expected = q1.probs()[b1] * q2.probs()[b2];
                    assert!((m.get(2 * b1 + b2, col) - expected).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn chsh_value_is_correlation_combination() {
    let mut r = rng(23);
    for k in 0..200 {
        let (rho, j, p1, p2, s) = draw(&mut r, k);
        let m = build_stochastic_matrix(&rho, (j, j), &s, (&p1, &p2)).unwrap();
        let c: Vec<f64> = pairs(&s)
            .iter()
            .map(|(x, y)| {
                let jt = local_spin_tomogram(&rho, (j, j), x, y).unwrap();
                correlation(&jt, &p1.signs(), &p2.signs()).unwrap()
            })
            .collect();
        let direct = (c[0] + c[1] + c[2] - c[3]).abs();
        assert!((chsh_value(&m) - direct).abs() < 1e-12);
        for (col, ck) in c.iter().enumerate() {
            assert!((m.correlation(col) - ck).abs() < 1e-12);
        }
    }
}

#[test]
fn label_flips_leave_chsh_unchanged() {
    let mut r = rng(24);
    for k in 0..200 {
        let (rho, j, p1, p2, s) = draw(&mut r, k);
        let value = |a: &Partition, b: &Partition| {
            chsh_value(&build_stochastic_matrix(&rho, (j, j), &s, (a, b)).unwrap())
        };
        let base = value(&p1, &p2);
        assert!((value(&p1.swapped(), &p2) - base).abs() < 1e-12);
        assert!((value(&p1, &p2.swapped()) - base).abs() < 1e-12);
        assert!((value(&p1.swapped(), &p2.swapped()) - base).abs() < 1e-12);
    }
}

#[test]
fn chsh_respects_tsirelson_bound() {
    let mut r = rng(25);
    for k in 0..200 {
        let (rho, j, p1, p2, s) = draw(&mut r, k);
        let m = build_stochastic_matrix(&rho, (j, j), &s, (&p1, &p2)).unwrap();
        assert!(chsh_value(&m) <= 2.0 * SQRT_2 + 1e-12);
    }
}

#[test]
fn stochastic_matrix_rejects_bad_columns() {
    let mut e = [[0.25; 4]; 4];
    assert!(StochasticMatrix4::new(e).is_ok());
    e[0][1] = 0.5;
    assert!(StochasticMatrix4::new(e).is_err());
}

#[test]
fn i3_of_maximally_mixed_state_vanishes() {
    let mut r = rng(26);
    let rho = DensityMatrix::maximally_mixed(9);
    for _ in 0..50 {
        let s = BellSettings::from_angles(&random_angles(&mut r)).unwrap();
        assert!(i3_value(&rho, &s).unwrap().abs() < 1e-12);
    }
}

#[test]
fn i3_of_maximally_entangled_state_at_zero_angles() {
    let rho = isotropic_state(3, 1.0).unwrap();
    let s = BellSettings::from_angles(&[0.0; 8]).unwrap();
    assert!((i3_value(&rho, &s).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn i3_of_product_states_is_classical() {
    let mut r = rng(27);
    for k in 0..200 {
        let rho = if k % 2 == 0 {
            random_pure(&mut r, 3).tensor(&random_pure(&mut r, 3))
        } else {
            random_state(&mut r, 3).tensor(&random_state(&mut r, 3))
        };
        let s = BellSettings::from_angles(&random_angles(&mut r)).unwrap();
        assert!(i3_value(&rho, &s).unwrap() <= 2.0 + 1e-12);
    }
}
