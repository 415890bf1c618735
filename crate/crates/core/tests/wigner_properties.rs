mod common;

use common::{random_direction, rng};
use rand::Rng;
use tomobell_core::c64;
use tomobell_core::matrix::exp_antihermitian;
use tomobell_core::wigner::{spin_operator_y, wigner_d, wigner_small_d, wigner_small_d_matrix, MeasurementDirection, SpinJ};

const SPINS: [u32; 6] = [1, 2, 3, 4, 5, 6];

fn thetas() -> Vec<f64> {
    (0..=12).map(|k| k as f64 * std::f64::consts::PI / 12.0).chain([0.123, 1.7, 3.0]).collect()
}

#[test]
fn small_d_symmetries() {
    for two_j in SPINS {
        let j = SpinJ::from_two_j(two_j);
        for theta in thetas() {
            for i in 0..j.dim() {
                for k in 0..j.dim() {
                    let (m, mp) = (j.two_m_at(i), j.two_m_at(k));
                    let d = wigner_small_d(j, m, mp, theta).unwrap();
                    let sign = if ((m - mp) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let swapped = wigner_small_d(j, mp, m, theta).unwrap();
                    let negated = wigner_small_d(j, -m, -mp, theta).unwrap();
                    assert!((d - sign * swapped).abs() < 1e-12, "j={two_j}/2 m={m} m'={mp}");
                    assert!((d - sign * negated).abs() < 1e-12, "j={two_j}/2 m={m} m'={mp}");
                }
            }
        }
    }
}

#[test]
fn small_d_columns_are_normalized() {
    for two_j in SPINS {
        let j = SpinJ::from_two_j(two_j);
        for theta in thetas() {
            let d = wigner_small_d_matrix(j, theta);
            for c in 0..j.dim() {
                let norm: f64 = (0..j.dim()).map(|r| d[(r, c)].norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn small_d_composes_additively() {
    let mut r = rng(3);
    for two_j in SPINS {
        let j = SpinJ::from_two_j(two_j);
        for _ in 0..10 {
            let (t1, t2) = (r.gen_range(0.0..1.5), r.gen_range(0.0..1.5));
            let product = wigner_small_d_matrix(j, t1)
                .multiply(&wigner_small_d_matrix(j, t2))
                .unwrap();
            assert!(product.max_abs_diff(&wigner_small_d_matrix(j, t1 + t2)) < 1e-12);
        }
    }
}

#[test]
fn small_d_matches_exponential_oracle() {
    for two_j in 1..=4 {
        let j = SpinJ::from_two_j(two_j);
        let jy = spin_operator_y(j);
        for theta in thetas() {
            let oracle = exp_antihermitian(&jy.scale(c64::new(0.0, -theta))).unwrap();
            let d = wigner_small_d_matrix(j, theta);
            assert!(d.max_abs_diff(&oracle) < 1e-10, "j={two_j}/2 theta={theta}");
        }
    }
}

#[test]
fn rotation_matrices_are_unitary() {
    let mut r = rng(11);
    for _ in 0..100 {
        let dir = random_direction(&mut r);
        for two_j in SPINS {
            assert!(wigner_d(SpinJ::from_two_j(two_j), &dir).is_unitary(1e-10));
        }
    }
}

#[test]
fn identity_at_zero_angles() {
    let id = MeasurementDirection::new(0.0, 0.0, 0.0);
    for two_j in SPINS {
        let j = SpinJ::from_two_j(two_j);
        let d = wigner_d(j, &id);
        assert!(d.max_abs_diff(&tomobell_core::ComplexMatrix::identity(j.dim())) < 1e-15);
    }
}
