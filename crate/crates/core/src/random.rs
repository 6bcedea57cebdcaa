//! Random test inputs: unitaries, Hermitian matrices and commuting pairs with
//! a prescribed sector structure.

use nalgebra::DMatrix;
use rand::Rng;

use crate::config::Tolerances;
use crate::error::Result;
use crate::linalg::{AntiHermitianMatrix, ComplexMatrix};
use crate::spectral::{CommutantBasis, JointSpectrum, SymmetryPair};
use crate::C64;

fn gaussian_like<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // sum of uniforms; shape is irrelevant, only genericity matters
    (0..4).map(|_| rng.random::<f64>() - 0.5).sum()
}

/// Matrix with independent entries in roughly `[-1, 1] + i[-1, 1]`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_inner(DMatrix::from_fn(n, n, |_, _| {
        C64::new(gaussian_like(rng), gaussian_like(rng))
    }))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_complex(rng, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

pub fn random_anti_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AntiHermitianMatrix {
    AntiHermitianMatrix::new_unchecked(random_hermitian(rng, n).times_i())
}

/// Unitary from the QR factorization of a random complex matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let q = random_complex(rng, n).into_matrix().qr().q();
    ComplexMatrix::from_inner(q)
}

/// Random composition of `n` into at most `max_parts` positive parts.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize, max_parts: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        if parts.len() + 1 == max_parts {
            parts.push(left);
            break;
        }
        let p = rng.random_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts
}

/// Commuting pair `(U Λ U†, U M U†)` with one joint eigenvalue per entry of
/// `multiplicities`.
///
/// Eigenvalues are distinct points of an integer grid plus a small common
/// shift, so sectors are well separated. Grid points are reused along one
/// axis, which produces blocks with `λ_ab = 0 ≠ μ_ab` and vice versa.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R, multiplicities: &[usize]) -> Result<SymmetryPair> {
    let k = multiplicities.len();
    let side = (k as f64).sqrt().ceil() as i64 + 1;
    let mut grid: Vec<(i64, i64)> = (0..side).flat_map(|a| (0..side).map(move |b| (a, b))).collect();
    let mut points = Vec::with_capacity(k);
    for _ in 0..k {
        let idx = rng.random_range(0..grid.len());
        points.push(grid.swap_remove(idx));
    }
    let shift_l = rng.random::<f64>() * 0.25;
    let shift_m = rng.random::<f64>() * 0.25;
    let mut lambdas = Vec::new();
    let mut mus = Vec::new();
    for (&(a, b), &m) in points.iter().zip(multiplicities) {
        for _ in 0..m {
            lambdas.push(a as f64 - (side / 2) as f64 + shift_l);
            mus.push(b as f64 - (side / 2) as f64 + shift_m);
        }
    }
    let u = random_unitary(rng, lambdas.len());
    let conj = |d: &[f64]| {
        let diag = ComplexMatrix::from_real_diagonal(d).expect("non-empty diagonal");
        let m = &(&u * &diag) * &u.adjoint();
        // symmetrize away the rounding in U Λ U†
        (&m + &m.adjoint()).scale_real(0.5)
    };
    SymmetryPair::new(conj(&lambdas), conj(&mus), &Tolerances::default())
}

/// Random element of a Cartan subalgebra of the commutant: `i·V diag(c) Vᴴ`
/// on every sector, in the eigenbasis returned by the diagonalization.
pub fn random_cartan_element<R: Rng + ?Sized>(rng: &mut R, spectrum: &JointSpectrum) -> ComplexMatrix {
    let n = spectrum.dim();
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for sector in &spectrum.sectors {
        let v = &sector.isometry;
        let d = DMatrix::from_fn(sector.multiplicity, sector.multiplicity, |i, j| {
            if i == j {
                C64::new(0.0, gaussian_like(rng))
            } else {
                C64::new(0.0, 0.0)
            }
        });
        acc += v * d * v.adjoint();
    }
    ComplexMatrix::from_inner(acc)
}

/// First order of a deformation whose second-order class vanishes.
///
/// The first order is `(a_Z, b_Z) + d(w)`: commuting commutant parts drawn
/// from one Cartan subalgebra plus the differential of a random off-diagonal
/// `w`. Both `δ¹Ĥ` and `δ¹Ŝ` are returned (Hermitian).
pub fn random_unobstructed_first_order<R: Rng + ?Sized>(
    rng: &mut R,
    pair: &SymmetryPair,
    spectrum: &JointSpectrum,
) -> (ComplexMatrix, ComplexMatrix) {
    let w = random_off_diagonal(rng, spectrum);
    let a = &random_cartan_element(rng, spectrum) + &pair.h().inner().bracket(&w);
    let b = &random_cartan_element(rng, spectrum) + &pair.s().inner().bracket(&w);
    let minus_i = C64::new(0.0, -1.0);
    (a.scale(minus_i), b.scale(minus_i))
}

/// Random Hermitian first-order cocycle `(δĤ, δŜ)`: independent commutant
/// parts plus the differential of a random off-diagonal `w`. The commutant
/// parts need not commute, so the second-order class is generically nonzero
/// when some sector is degenerate.
pub fn random_cocycle<R: Rng + ?Sized>(
    rng: &mut R,
    pair: &SymmetryPair,
    spectrum: &JointSpectrum,
) -> (ComplexMatrix, ComplexMatrix) {
    let basis = crate::spectral::commutant_basis(spectrum);
    let w = random_off_diagonal(rng, spectrum);
    let a = &random_commutant_element(rng, &basis) + &pair.h().inner().bracket(&w);
    let b = &random_commutant_element(rng, &basis) + &pair.s().inner().bracket(&w);
    let minus_i = C64::new(0.0, -1.0);
    (a.scale(minus_i), b.scale(minus_i))
}

/// Random anti-Hermitian element supported on the off-diagonal blocks.
pub fn random_off_diagonal<R: Rng + ?Sized>(rng: &mut R, spectrum: &JointSpectrum) -> ComplexMatrix {
    let x = random_anti_hermitian(rng, spectrum.dim()).into_inner();
    spectrum.off_diagonal_part(&x)
}

pub fn random_commutant_element<R: Rng + ?Sized>(rng: &mut R, basis: &CommutantBasis) -> ComplexMatrix {
    let coeffs: Vec<f64> = (0..basis.len()).map(|_| gaussian_like(rng)).collect();
    basis.combine(&coeffs).into_inner()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::joint_diagonalize;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 5);
        let err = (&(&u * &u.adjoint()) - &ComplexMatrix::identity(5)).frobenius_norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn pair_has_requested_sectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let parts = random_partition(&mut rng, 6, 4);
            let pair = random_commuting_pair(&mut rng, &parts).unwrap();
            let spec = joint_diagonalize(&pair, None).unwrap();
            let mut got = spec.multiplicities();
            let mut want = parts.clone();
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }
}
