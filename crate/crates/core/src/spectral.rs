//! Joint spectral decomposition of a commuting Hermitian pair, block
//! projections of `u(V)`, and the commutant `Z`.

use nalgebra::DMatrix;

use crate::config::{Tolerances, CLUSTER_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::{anti_hermitize, u_basis, AntiHermitianMatrix, ComplexMatrix};
use crate::C64;

/// A commuting pair `(Ĥ, Ŝ)` of Hermitian operators together with the
/// anti-Hermitian generators `H = iĤ`, `S = iŜ`.
#[derive(Debug, Clone)]
pub struct SymmetryPair {
    hamiltonian: ComplexMatrix,
    symmetry: ComplexMatrix,
    h: AntiHermitianMatrix,
    s: AntiHermitianMatrix,
}

impl SymmetryPair {
    pub fn new(hamiltonian: ComplexMatrix, symmetry: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if hamiltonian.dim() != symmetry.dim() {
            return Err(Error::input(format!(
                "H is {0}x{0} but S is {1}x{1}",
                hamiltonian.dim(),
                symmetry.dim()
            )));
        }
        let h = anti_hermitize(&hamiltonian, tol.hermiticity)
            .map_err(|e| e.prefixed("H"))?;
        let s = anti_hermitize(&symmetry, tol.hermiticity)
            .map_err(|e| e.prefixed("S"))?;
        let comm = hamiltonian.bracket(&symmetry).frobenius_norm();
        let scale = hamiltonian.frobenius_norm() * symmetry.frobenius_norm();
        if comm > tol.commute * scale {
            return Err(Error::input(format!(
                "H and S do not commute: ‖[H,S]‖_F = {comm:.3e} exceeds {:.3e}",
                tol.commute * scale
            )));
        }
        Ok(SymmetryPair {
            hamiltonian,
            symmetry,
            h,
            s,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn symmetry(&self) -> &ComplexMatrix {
        &self.symmetry
    }

    /// `H = iĤ`.
    pub fn h(&self) -> &AntiHermitianMatrix {
        &self.h
    }

    /// `S = iŜ`.
    pub fn s(&self) -> &AntiHermitianMatrix {
        &self.s
    }
}

/// One joint eigenspace `V_(a,α)`.
#[derive(Debug, Clone)]
pub struct Sector {
    /// Eigenvalue of `Ĥ`.
    pub lambda: f64,
    /// Eigenvalue of `Ŝ`.
    pub mu: f64,
    pub multiplicity: usize,
    /// Orthogonal projector onto the sector.
    pub projector: ComplexMatrix,
    /// `dim × multiplicity` matrix with orthonormal columns spanning the sector.
    pub isometry: DMatrix<C64>,
}

#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub sectors: Vec<Sector>,
    pub cluster_tol: f64,
    dim: usize,
}

/// Unordered pair of sector indices, stored with `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex {
    pub first: usize,
    pub second: usize,
}

impl BlockIndex {
    pub fn new(a: usize, b: usize) -> Self {
        BlockIndex {
            first: a.min(b),
            second: a.max(b),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.first == self.second
    }
}

/// Spectral scale used by the default clustering tolerance.
fn spectral_scale(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let radius = values.iter().fold(0.0_f64, |r, v| r.max(v.abs()));
    (hi - lo).max(radius)
}

/// Groups sorted `(value, index)` pairs whose consecutive gaps are `<= tol`.
fn cluster_sorted(mut vals: Vec<(f64, usize)>, tol: f64) -> Vec<Vec<(f64, usize)>> {
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, usize)>> = Vec::new();
    for v in vals {
        match groups.last_mut() {
            Some(g) if (v.0 - g.last().unwrap().0).abs() <= tol => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups
}

fn hermitian_eigen(m: DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let n = m.nrows();
    let eig = m.try_symmetric_eigen(f64::EPSILON, 10_000 * n.max(1)).ok_or_else(|| {
        Error::numerical("Hermitian eigensolver did not converge")
    })?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Decomposes `V` into joint eigenspaces of `(Ĥ, Ŝ)`.
///
/// `Ĥ` is diagonalized first; `Ŝ` is then diagonalized on each eigenspace of
/// `Ĥ`. A `cluster_tol` of `None` uses `1e-8 · max(spectral range, spectral
/// radius)` over both operators.
pub fn joint_diagonalize(pair: &SymmetryPair, cluster_tol: Option<f64>) -> Result<JointSpectrum> {
    let n = pair.dim();
    let (h_vals, h_vecs) = hermitian_eigen(pair.hamiltonian().as_matrix().clone())?;
    let (s_all, _) = hermitian_eigen(pair.symmetry().as_matrix().clone())?;
    let tol = match cluster_tol {
        Some(t) if t < 0.0 || !t.is_finite() => {
            return Err(Error::input(format!("cluster tolerance must be nonnegative, got {t}")))
        }
        Some(t) => t,
        None => CLUSTER_FACTOR * spectral_scale(&h_vals).max(spectral_scale(&s_all)),
    };

    let mut sectors = Vec::new();
    let h_groups = cluster_sorted(h_vals.iter().copied().zip(0..).collect(), tol);
    for group in h_groups {
        let cols: Vec<usize> = group.iter().map(|&(_, i)| i).collect();
        let q = h_vecs.select_columns(&cols);
        let lambda = group.iter().map(|g| g.0).sum::<f64>() / group.len() as f64;
        let restricted = q.adjoint() * pair.symmetry().as_matrix() * &q;
        // Hermitize away rounding before the second eigensolve.
        let restricted = (&restricted + restricted.adjoint()) * C64::new(0.5, 0.0);
        let (s_vals, s_vecs) = hermitian_eigen(restricted)?;
        for sg in cluster_sorted(s_vals.iter().copied().zip(0..).collect(), tol) {
            let scols: Vec<usize> = sg.iter().map(|&(_, i)| i).collect();
            let isometry = &q * s_vecs.select_columns(&scols);
            let mu = sg.iter().map(|g| g.0).sum::<f64>() / sg.len() as f64;
            let projector = ComplexMatrix::from_inner(&isometry * isometry.adjoint());
            sectors.push(Sector {
                lambda,
                mu,
                multiplicity: scols.len(),
                projector,
                isometry,
            });
        }
    }
    sectors.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.mu.total_cmp(&b.mu)));

    let spectrum = JointSpectrum {
        sectors,
        cluster_tol: tol,
        dim: n,
    };
    spectrum.check_eigen_residuals(pair)?;
    Ok(spectrum)
}

impl JointSpectrum {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    /// All sectors one-dimensional.
    pub fn is_nondegenerate(&self) -> bool {
        self.sectors.iter().all(|s| s.multiplicity == 1)
    }

    /// `Σ n²`, the real dimension of the commutant.
    pub fn commutant_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.multiplicity * s.multiplicity).sum()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.multiplicity).collect()
    }

    /// `(λ_a − λ_b, μ_α − μ_β)` for the block.
    pub fn eigen_differences(&self, idx: BlockIndex) -> (f64, f64) {
        let a = &self.sectors[idx.first];
        let b = &self.sectors[idx.second];
        (a.lambda - b.lambda, a.mu - b.mu)
    }

    fn check_eigen_residuals(&self, pair: &SymmetryPair) -> Result<()> {
        let scale = pair
            .hamiltonian()
            .frobenius_norm()
            .max(pair.symmetry().frobenius_norm());
        let bound = self.cluster_tol + 1e-10 * scale.max(1.0);
        for (k, sector) in self.sectors.iter().enumerate() {
            let v = &sector.isometry;
            let rh = (pair.hamiltonian().as_matrix() * v - v * C64::new(sector.lambda, 0.0)).norm();
            let rs = (pair.symmetry().as_matrix() * v - v * C64::new(sector.mu, 0.0)).norm();
            if rh > bound * (sector.multiplicity as f64).sqrt()
                || rs > bound * (sector.multiplicity as f64).sqrt()
            {
                return Err(Error::numerical(format!(
                    "sector {k} (λ={}, μ={}) is not a joint eigenspace: residuals {rh:.3e}, {rs:.3e}",
                    sector.lambda, sector.mu
                )));
            }
        }
        Ok(())
    }

    /// All unordered block indices in canonical order.
    pub fn block_indices(&self) -> impl Iterator<Item = BlockIndex> + '_ {
        let m = self.sectors.len();
        (0..m).flat_map(move |a| (a..m).map(move |b| BlockIndex::new(a, b)))
    }

    pub fn off_diagonal_blocks(&self) -> impl Iterator<Item = BlockIndex> + '_ {
        self.block_indices().filter(|b| !b.is_diagonal())
    }

    fn check_index(&self, idx: BlockIndex) -> Result<()> {
        if idx.second >= self.sectors.len() {
            return Err(Error::input(format!(
                "block ({}, {}) out of range for {} sectors",
                idx.first,
                idx.second,
                self.sectors.len()
            )));
        }
        Ok(())
    }

    /// `Π_a x Π_b` (ordered).
    pub(crate) fn corner(&self, x: &ComplexMatrix, a: usize, b: usize) -> ComplexMatrix {
        ComplexMatrix::sandwich(&self.sectors[a].projector, x, &self.sectors[b].projector)
    }

    /// The component of `x` in the commutant: `Σ_a Π_a x Π_a`.
    pub fn diagonal_part(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for a in 0..self.sectors.len() {
            out += &self.corner(x, a, a);
        }
        out
    }

    pub fn off_diagonal_part(&self, x: &ComplexMatrix) -> ComplexMatrix {
        x - &self.diagonal_part(x)
    }

    /// Projection of an anti-Hermitian matrix onto `Z`.
    pub fn commutant_projection(&self, x: &AntiHermitianMatrix) -> AntiHermitianMatrix {
        AntiHermitianMatrix::new_unchecked(self.diagonal_part(x.inner()))
    }
}

/// Projection of `x` onto the block `B_(a,b)` of `u(V)`.
///
/// For `a == b` this is `Π_a x Π_a`; otherwise `Π_a x Π_b + Π_b x Π_a`. The
/// off-diagonal projector carries unit weight so that it is idempotent and
/// the blocks resolve the identity.
pub fn block_project(x: &ComplexMatrix, spectrum: &JointSpectrum, idx: BlockIndex) -> Result<ComplexMatrix> {
    spectrum.check_index(idx)?;
    if x.dim() != spectrum.dim {
        return Err(Error::input(format!(
            "matrix is {0}x{0}, spectrum acts on dimension {1}",
            x.dim(),
            spectrum.dim
        )));
    }
    if idx.is_diagonal() {
        Ok(spectrum.corner(x, idx.first, idx.first))
    } else {
        Ok(&spectrum.corner(x, idx.first, idx.second) + &spectrum.corner(x, idx.second, idx.first))
    }
}

/// Orthonormal real basis of the commutant `Z ≅ ⊕ u(n_sector)`.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub elements: Vec<AntiHermitianMatrix>,
    /// Sector index of each element.
    pub sector_of: Vec<usize>,
}

impl CommutantBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates `⟨x, e_k⟩` of `x` along the basis.
    pub fn coefficients(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.elements.iter().map(|e| e.inner().real_inner(x)).collect()
    }

    pub fn combine(&self, coeffs: &[f64]) -> AntiHermitianMatrix {
        let n = self.elements.first().map_or(0, |e| e.dim());
        let mut out = ComplexMatrix::zeros(n);
        for (c, e) in coeffs.iter().zip(&self.elements) {
            out += &e.inner().scale_real(*c);
        }
        AntiHermitianMatrix::new_unchecked(out)
    }
}

pub fn commutant_basis(spectrum: &JointSpectrum) -> CommutantBasis {
    let mut elements = Vec::with_capacity(spectrum.commutant_dim());
    let mut sector_of = Vec::with_capacity(spectrum.commutant_dim());
    for (k, sector) in spectrum.sectors.iter().enumerate() {
        let v = &sector.isometry;
        for b in u_basis(sector.multiplicity) {
            let e = ComplexMatrix::from_inner(v * b.as_matrix() * v.adjoint());
            elements.push(AntiHermitianMatrix::new_unchecked(e));
            sector_of.push(k);
        }
    }
    CommutantBasis {
        elements,
        sector_of,
    }
}

/// Structure constants `f_ij^k = −tr([e_i, e_j] e_k)` of an orthonormal basis.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    n: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        StructureConstants { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |f_ij^k + f_ji^k|`.
    pub fn antisymmetry_violation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// `max |f_ij^l f_lk^m + f_jk^l f_li^m + f_ki^l f_lj^m|`.
    pub fn jacobi_violation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += self.get(i, j, l) * self.get(l, k, m)
                                + self.get(j, k, l) * self.get(l, i, m)
                                + self.get(k, i, l) * self.get(l, j, m);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `Σ_ij f_ij^k hⁱ sʲ` for each `k`.
    pub fn contract(&self, h: &[f64], s: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if h[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if s[j] == 0.0 {
                    continue;
                }
                let w = h[i] * s[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += self.get(i, j, k) * w;
                }
            }
        }
        out
    }

    /// `max_ij ‖[e_i, e_j] − Σ_k f_ij^k e_k‖_F`.
    pub fn reconstruction_error(&self, basis: &CommutantBasis) -> f64 {
        let mut worst = 0.0_f64;
        for (i, ei) in basis.elements.iter().enumerate() {
            for (j, ej) in basis.elements.iter().enumerate() {
                let mut r = ei.inner().bracket(ej.inner());
                for (k, ek) in basis.elements.iter().enumerate() {
                    r -= &ek.inner().scale_real(self.get(i, j, k));
                }
                worst = worst.max(r.frobenius_norm());
            }
        }
        worst
    }
}

/// Structure constants of the commutant in the given basis.
///
/// Elements from different sectors commute, so only same-sector triples are
/// evaluated.
pub fn structure_constants(basis: &CommutantBasis) -> StructureConstants {
    let n = basis.len();
    let mut data = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            if basis.sector_of[i] != basis.sector_of[j] {
                continue;
            }
            let c = basis.elements[i].inner().bracket(basis.elements[j].inner());
            for k in 0..n {
                if basis.sector_of[k] == basis.sector_of[i] {
                    data[(i * n + j) * n + k] = basis.elements[k].inner().real_inner(&c);
                }
            }
        }
    }
    StructureConstants { n, data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn pair(h: &[f64], s: &[f64]) -> SymmetryPair {
        SymmetryPair::new(
            ComplexMatrix::from_real_diagonal(h).unwrap(),
            ComplexMatrix::from_real_diagonal(s).unwrap(),
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn three_level_pair() -> SymmetryPair {
        pair(&[1., 1., 0.], &[0., 0., 1.])
    }

    #[test]
    fn three_level_spectrum() {
        let sp = joint_diagonalize(&three_level_pair(), None).unwrap();
        assert_eq!(sp.len(), 2);
        let s0 = &sp.sectors[0];
        let s1 = &sp.sectors[1];
        assert_eq!((s0.lambda, s0.mu, s0.multiplicity), (0.0, 1.0, 1));
        assert_eq!((s1.lambda, s1.mu, s1.multiplicity), (1.0, 0.0, 2));
    }

    #[test]
    fn identity_pair_single_sector() {
        let sp = joint_diagonalize(&pair(&[1., 1., 1., 1.], &[1., 1., 1., 1.]), None).unwrap();
        assert_eq!(sp.multiplicities(), vec![4]);
    }

    #[test]
    fn nondegenerate_diagonal() {
        let sp = joint_diagonalize(&pair(&[1., 2., 3.], &[0., 0., 0.]), None).unwrap();
        assert_eq!(sp.multiplicities(), vec![1, 1, 1]);
        assert!(sp.is_nondegenerate());
    }

    #[test]
    fn zero_pair_single_sector() {
        let sp = joint_diagonalize(&pair(&[0., 0.], &[0., 0.]), None).unwrap();
        assert_eq!(sp.multiplicities(), vec![2]);
    }

    #[test]
    fn rejects_noncommuting() {
        let h = ComplexMatrix::from_real_diagonal(&[1., 0.]).unwrap();
        let s = ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap();
        let err = SymmetryPair::new(h, s, &Tolerances::default()).unwrap_err();
        assert!(err.to_string().contains("do not commute"));
    }

    #[test]
    fn block_project_examples() {
        let sp = joint_diagonalize(&three_level_pair(), None).unwrap();
        let dh1 = ComplexMatrix::from_real_rows(&[&[0., 1., 1.], &[1., 0., 0.], &[1., 0., 0.]]).unwrap();
        // sector 1 is (λ=1, μ=0) with Π = diag(1,1,0)
        let p = block_project(&dh1, &sp, BlockIndex::new(1, 1)).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 0.]]).unwrap();
        assert!((&p - &expected).frobenius_norm() < 1e-14);

        let off = block_project(&ComplexMatrix::identity(3), &sp, BlockIndex::new(0, 1)).unwrap();
        assert!(off.frobenius_norm() < 1e-14);

        assert!(block_project(&dh1, &sp, BlockIndex::new(0, 2)).is_err());
    }

    #[test]
    fn blocks_resolve_identity_and_are_idempotent() {
        let sp = joint_diagonalize(&pair(&[1., 1., 0., 0.], &[0., 0., 1., 2.]), None).unwrap();
        let x = ComplexMatrix::from_rows(&[
            vec![C64::new(0., 1.), C64::new(1., 2.), C64::new(0., 3.), C64::new(-1., 0.)],
            vec![C64::new(-1., 2.), C64::new(0., -2.), C64::new(2., 1.), C64::new(0., 1.)],
            vec![C64::new(0., 3.), C64::new(-2., 1.), C64::new(0., 0.5), C64::new(1., 1.)],
            vec![C64::new(1., 0.), C64::new(0., 1.), C64::new(-1., 1.), C64::new(0., 0.)],
        ])
        .unwrap();
        assert!(x.anti_hermiticity_defect() < 1e-15);
        let mut sum = ComplexMatrix::zeros(4);
        for idx in sp.block_indices().collect::<Vec<_>>() {
            let p = block_project(&x, &sp, idx).unwrap();
            let pp = block_project(&p, &sp, idx).unwrap();
            assert!((&pp - &p).frobenius_norm() < 1e-12);
            sum += &p;
        }
        assert!((&sum - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn commutant_counts() {
        let sp = joint_diagonalize(&three_level_pair(), None).unwrap();
        let b = commutant_basis(&sp);
        assert_eq!(b.len(), 5);
        let nd = commutant_basis(&joint_diagonalize(&pair(&[1., 2., 3., 4.], &[0.; 4]), None).unwrap());
        assert_eq!(nd.len(), 4);
        let single = commutant_basis(&joint_diagonalize(&pair(&[2.; 3], &[1.; 3]), None).unwrap());
        assert_eq!(single.len(), 9);
    }

    #[test]
    fn commutant_elements_commute_and_are_orthonormal() {
        let p = three_level_pair();
        let b = commutant_basis(&joint_diagonalize(&p, None).unwrap());
        for (i, e) in b.elements.iter().enumerate() {
            let ch = commutator(p.h().inner(), e.inner()).unwrap().frobenius_norm();
            let cs = commutator(p.s().inner(), e.inner()).unwrap().frobenius_norm();
            assert!(ch + cs < 1e-9);
            for (j, f) in b.elements.iter().enumerate() {
                let ip = e.killing_inner(f);
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn abelian_commutant_has_zero_constants() {
        let b = commutant_basis(&joint_diagonalize(&pair(&[1., 2., 3.], &[0.; 3]), None).unwrap());
        assert_eq!(structure_constants(&b).max_abs(), 0.0);
    }

    #[test]
    fn su2_triple_constants() {
        // Oracle: direct commutators of iσ_a/√2, which satisfy
        // [iσ_a/√2, iσ_b/√2] = −√2 ε_abc iσ_c/√2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let sx = ComplexMatrix::from_rows(&[
            vec![C64::new(0., 0.), C64::new(0., r)],
            vec![C64::new(0., r), C64::new(0., 0.)],
        ])
        .unwrap();
        let sy = ComplexMatrix::from_real_rows(&[&[0., r], &[-r, 0.]]).unwrap();
        let sz = ComplexMatrix::from_rows(&[
            vec![C64::new(0., r), C64::new(0., 0.)],
            vec![C64::new(0., 0.), C64::new(0., -r)],
        ])
        .unwrap();
        let triple = [sx, sy, sz];
        let mut direct = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let c = commutator(&triple[i], &triple[j]).unwrap();
                for k in 0..3 {
                    direct[i][j][k] = triple[k].real_inner(&c);
                }
            }
        }
        let s2 = std::f64::consts::SQRT_2;
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            match (i, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((direct[i][j][k] + s2 * eps(i, j, k)).abs() < 1e-14);
                }
            }
        }

        // The same triple expressed in the commutant basis of u(2) ⊕ u(1).
        let b = commutant_basis(&joint_diagonalize(&three_level_pair(), None).unwrap());
        let f = structure_constants(&b);
        let coords: Vec<Vec<f64>> = triple
            .iter()
            .map(|t| {
                let mut big = ComplexMatrix::zeros(3);
                let iso = &joint_diagonalize(&three_level_pair(), None).unwrap().sectors[1].isometry;
                big = &big + &ComplexMatrix::from_inner(iso * t.as_matrix() * iso.adjoint());
                b.coefficients(&big)
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let c = f.contract(&coords[i], &coords[j]);
                for k in 0..3 {
                    let along: f64 = c.iter().zip(&coords[k]).map(|(x, y)| x * y).sum();
                    assert!((along - direct[i][j][k]).abs() < 1e-12);
                }
            }
        }
        assert!(f.jacobi_violation() < 1e-10);
        assert!(f.antisymmetry_violation() < 1e-14);
        assert!(f.reconstruction_error(&b) < 1e-10);
    }
}
