#![allow(dead_code)]

use anomaly_core::linalg::commutator;
use anomaly_core::random::{random_commuting_pair, random_partition};
use anomaly_core::spectral::{joint_diagonalize, JointSpectrum, SymmetryPair};
use anomaly_core::{AntiHermitianMatrix, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random pair of dimension `2..=max_dim` with at most `max_parts` sectors.
pub fn random_system(rng: &mut ChaCha8Rng, max_dim: usize, max_parts: usize) -> (SymmetryPair, JointSpectrum) {
    let n = rng.random_range(2..=max_dim);
    let parts = random_partition(rng, n, max_parts);
    let pair = random_commuting_pair(rng, &parts).unwrap();
    let spectrum = joint_diagonalize(&pair, None).unwrap();
    (pair, spectrum)
}

pub fn br(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    commutator(a, b).unwrap()
}

pub fn ah(m: ComplexMatrix) -> AntiHermitianMatrix {
    AntiHermitianMatrix::new(m, 1e-9).unwrap()
}

pub fn hermitian_of(a: &ComplexMatrix) -> ComplexMatrix {
    a.scale(anomaly_core::C64::new(0.0, -1.0))
}

/// Fixed-seed proptest configuration so failures reproduce across runs.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_cafe),
        failure_persistence: None,
        ..Default::default()
    }
}
