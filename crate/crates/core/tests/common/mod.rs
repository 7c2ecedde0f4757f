#![allow(dead_code)]

use ence::linalg::{self, ComplexMatrix};
use ence::states::{self, make_1wcc, DensityMatrix, Party};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000_0000)
}

/// Hermitian matrix with standard normal real and imaginary parts.
pub fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    let entries: Vec<Complex64> = (0..d * d)
        .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
        .collect();
    ComplexMatrix::from_row_major(d, d, entries)
        .unwrap()
        .hermitian_part()
}

/// `Σ_i |i⟩⟨i| ⊗ p_i σ_i` (or mirrored) with random blocks and weights.
pub fn random_1wcc(seed: u64) -> DensityMatrix {
    let mut r = rng(seed);
    let d_basis = r.random_range(2..=3);
    let d_other = r.random_range(2..=3);
    let side = if r.random::<bool>() {
        Party::A
    } else {
        Party::B
    };
    let weights: Vec<f64> = (0..d_basis).map(|_| 1.0 - r.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let blocks: Vec<ComplexMatrix> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let sigma = states::random_density(
                &[d_other],
                seed.wrapping_mul(31).wrapping_add(i as u64),
                None,
            )
            .unwrap();
            sigma.matrix().scale(w / total)
        })
        .collect();
    make_1wcc(side, &blocks).unwrap()
}

/// Random bipartite state with dims drawn from {2, 3} x {2, 3}.
pub fn random_state(seed: u64) -> DensityMatrix {
    let mut r = rng(seed);
    let da = r.random_range(2..=3);
    let db = r.random_range(2..=3);
    states::random_density(&[da, db], seed, None).unwrap()
}

pub fn spectrum(m: &ComplexMatrix) -> Vec<f64> {
    linalg::eig_hermitian(m, false).unwrap().into_values()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
