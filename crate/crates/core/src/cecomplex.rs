//! The Chevalley-Eilenberg complex.
//!
//! For the abelian algebra `ℝ² = span(e_H, e_S)` acting on `u(V)` through
//! `ad_H`, `ad_S` the complex is
//!
//! ```text
//! 0 → u(V) → (c^H ⊕ c^S) ⊗ u(V) → c^H c^S ⊗ u(V) → 0
//! d(w)                = c^H [H,w] + c^S [S,w]
//! d(c^H x + c^S y)    = c^H c^S ([H,y] − [S,x])
//! ```
//!
//! The general differential `d = c^i ad_{ρ(e_i)} − ½ f_ij^k c^i c^j ∂/∂c^k`
//! for an arbitrary Lie algebra lives in [`general`].

pub mod general;

use nalgebra::DMatrix;

use crate::error::{BlockNorm, Error, Result};
use crate::linalg::{rank_analysis_scaled, real_svd, realified_map, AntiHermitianMatrix, ComplexMatrix};
use crate::spectral::{commutant_basis, BlockIndex, CommutantBasis, JointSpectrum, SymmetryPair};
use crate::C64;

pub use general::{d_general, GeneralCochain, LieAlgebraData, LieCoefficient};

/// A cochain of the abelian complex.
#[derive(Debug, Clone, PartialEq)]
pub enum Cochain {
    Degree0 {
        w: AntiHermitianMatrix,
    },
    Degree1 {
        /// Coefficient of `c^H`.
        x_h: AntiHermitianMatrix,
        /// Coefficient of `c^S`.
        y_s: AntiHermitianMatrix,
    },
    Degree2 {
        /// Coefficient of `c^H c^S`.
        z: AntiHermitianMatrix,
    },
    /// The zero element past the top degree.
    Terminal {
        dim: usize,
    },
}

impl Cochain {
    pub fn degree(&self) -> usize {
        match self {
            Cochain::Degree0 { .. } => 0,
            Cochain::Degree1 { .. } => 1,
            Cochain::Degree2 { .. } => 2,
            Cochain::Terminal { .. } => 3,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Cochain::Degree0 { w } => w.dim(),
            Cochain::Degree1 { x_h, .. } => x_h.dim(),
            Cochain::Degree2 { z } => z.dim(),
            Cochain::Terminal { dim } => *dim,
        }
    }

    pub fn zero(degree: usize, dim: usize) -> Self {
        let z = || AntiHermitianMatrix::zeros(dim);
        match degree {
            0 => Cochain::Degree0 { w: z() },
            1 => Cochain::Degree1 { x_h: z(), y_s: z() },
            2 => Cochain::Degree2 { z: z() },
            _ => Cochain::Terminal { dim },
        }
    }

    pub fn components(&self) -> Vec<&AntiHermitianMatrix> {
        match self {
            Cochain::Degree0 { w } => vec![w],
            Cochain::Degree1 { x_h, y_s } => vec![x_h, y_s],
            Cochain::Degree2 { z } => vec![z],
            Cochain::Terminal { .. } => vec![],
        }
    }

    /// Frobenius norm over all components.
    pub fn norm(&self) -> f64 {
        self.components()
            .iter()
            .map(|c| c.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn map_components(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Cochain {
        let g = |a: &AntiHermitianMatrix| AntiHermitianMatrix::new_unchecked(f(a.inner()));
        match self {
            Cochain::Degree0 { w } => Cochain::Degree0 { w: g(w) },
            Cochain::Degree1 { x_h, y_s } => Cochain::Degree1 {
                x_h: g(x_h),
                y_s: g(y_s),
            },
            Cochain::Degree2 { z } => Cochain::Degree2 { z: g(z) },
            Cochain::Terminal { dim } => Cochain::Terminal { dim: *dim },
        }
    }

    fn zip_components(
        &self,
        other: &Cochain,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Cochain> {
        let g = |a: &AntiHermitianMatrix, b: &AntiHermitianMatrix| {
            AntiHermitianMatrix::new_unchecked(f(a.inner(), b.inner()))
        };
        if self.dim() != other.dim() {
            return Err(Error::input("cochains act on different dimensions"));
        }
        Ok(match (self, other) {
            (Cochain::Degree0 { w: a }, Cochain::Degree0 { w: b }) => Cochain::Degree0 { w: g(a, b) },
            (Cochain::Degree1 { x_h: a, y_s: b }, Cochain::Degree1 { x_h: c, y_s: d }) => {
                Cochain::Degree1 {
                    x_h: g(a, c),
                    y_s: g(b, d),
                }
            }
            (Cochain::Degree2 { z: a }, Cochain::Degree2 { z: b }) => Cochain::Degree2 { z: g(a, b) },
            (Cochain::Terminal { dim }, Cochain::Terminal { .. }) => Cochain::Terminal { dim: *dim },
            _ => {
                return Err(Error::input(format!(
                    "degree mismatch: {} vs {}",
                    self.degree(),
                    other.degree()
                )))
            }
        })
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_components(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_components(other, |a, b| a - b)
    }

    /// Keeps only the diagonal-block (commutant) part of each component.
    pub fn diagonal_part(&self, spectrum: &JointSpectrum) -> Cochain {
        self.map_components(|m| spectrum.diagonal_part(m))
    }

    pub fn off_diagonal_part(&self, spectrum: &JointSpectrum) -> Cochain {
        self.map_components(|m| spectrum.off_diagonal_part(m))
    }
}

/// The abelian differential `c^H ad_H + c^S ad_S`.
pub fn d_abelian(c: &Cochain, pair: &SymmetryPair) -> Result<Cochain> {
    if c.dim() != pair.dim() {
        return Err(Error::input(format!(
            "cochain acts on dimension {}, pair on {}",
            c.dim(),
            pair.dim()
        )));
    }
    let h = pair.h().inner();
    let s = pair.s().inner();
    let ah = AntiHermitianMatrix::new_unchecked;
    Ok(match c {
        Cochain::Degree0 { w } => Cochain::Degree1 {
            x_h: ah(h.bracket(w.inner())),
            y_s: ah(s.bracket(w.inner())),
        },
        Cochain::Degree1 { x_h, y_s } => Cochain::Degree2 {
            z: ah(&h.bracket(y_s.inner()) - &s.bracket(x_h.inner())),
        },
        Cochain::Degree2 { .. } | Cochain::Terminal { .. } => Cochain::Terminal { dim: c.dim() },
    })
}

/// Which eigenvalue difference the homotopy divides by on a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Invert `ad_H`, eigenvalue `i(λ_a − λ_b)`.
    Hamiltonian,
    /// Invert `ad_S`, eigenvalue `i(μ_α − μ_β)`.
    Symmetry,
}

/// Branch choice for an off-diagonal block: the larger of `|λ_ab|`, `|μ_αβ|`.
pub fn choose_branch(spectrum: &JointSpectrum, idx: BlockIndex) -> Result<(Branch, f64)> {
    let (dl, dm) = spectrum.eigen_differences(idx);
    let tol = spectrum.cluster_tol;
    if dl.abs() <= tol && dm.abs() <= tol {
        return Err(Error::Spectrum(format!(
            "sectors {} and {} share the eigenvalue pair within {tol:.3e}",
            idx.first, idx.second
        )));
    }
    if dl.abs() >= dm.abs() {
        Ok((Branch::Hamiltonian, dl))
    } else {
        Ok((Branch::Symmetry, dm))
    }
}

/// Inverts the block action `ω_ab ↦ iδ ω_ab`, `ω_ba ↦ −iδ ω_ba`.
fn divide_block(x: &ComplexMatrix, spectrum: &JointSpectrum, idx: BlockIndex, delta: f64) -> ComplexMatrix {
    let (a, b) = (idx.first, idx.second);
    let factor = C64::new(0.0, -1.0 / delta);
    let ab = spectrum.corner(x, a, b).scale(factor);
    let ba = spectrum.corner(x, b, a).scale(-factor);
    &ab + &ba
}

/// Contracting homotopy on the off-diagonal subcomplex, together with the
/// branch taken on every block.
#[derive(Debug, Clone)]
pub struct HomotopyResult {
    pub cochain: Cochain,
    pub branches: Vec<(BlockIndex, Branch)>,
}

/// Relative size of diagonal-block components tolerated by the homotopy.
const EXACTNESS_TOL: f64 = 1e-9;

fn diagonal_block_norms(c: &Cochain, spectrum: &JointSpectrum) -> Vec<BlockNorm> {
    let mut out = Vec::new();
    for a in 0..spectrum.len() {
        let norm = c
            .components()
            .iter()
            .map(|m| spectrum.corner(m.inner(), a, a).frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt();
        out.push(BlockNorm {
            block: BlockIndex::new(a, a),
            norm,
        });
    }
    out
}

/// The homotopy `h` of the acyclicity argument, with `dh + hd = id` on the
/// off-diagonal subcomplex.
///
/// On a block where `ad_H` is inverted (eigenvalue `A`, with `ad_S = B`):
/// `h(x, y) = A⁻¹x` and `h(z) = (0, A⁻¹z)`. Where `ad_S` is inverted:
/// `h(x, y) = B⁻¹y` and `h(z) = (−B⁻¹z, 0)`.
pub fn homotopy(c: &Cochain, spectrum: &JointSpectrum) -> Result<HomotopyResult> {
    if c.dim() != spectrum.dim() {
        return Err(Error::input("cochain and spectrum act on different dimensions"));
    }
    if !matches!(c, Cochain::Degree1 { .. } | Cochain::Degree2 { .. }) {
        return Err(Error::input(format!(
            "homotopy is defined on degrees 1 and 2, got degree {}",
            c.degree()
        )));
    }
    let norms = diagonal_block_norms(c, spectrum);
    // floor at unit roundoff: a cochain that is itself roundoff is exact
    let limit = EXACTNESS_TOL * c.norm().max(f64::EPSILON);
    if norms.iter().any(|b| b.norm > limit) {
        return Err(Error::NotExact {
            blocks: norms.into_iter().filter(|b| b.norm > limit).collect(),
        });
    }
    homotopy_off_diagonal(c, spectrum)
}

/// [`homotopy`] without the exactness check; diagonal blocks are ignored.
pub(crate) fn homotopy_off_diagonal(c: &Cochain, spectrum: &JointSpectrum) -> Result<HomotopyResult> {
    let n = c.dim();
    let mut out_x = ComplexMatrix::zeros(n);
    let mut out_y = ComplexMatrix::zeros(n);
    let mut branches = Vec::new();
    for idx in spectrum.off_diagonal_blocks() {
        let (branch, delta) = choose_branch(spectrum, idx)?;
        branches.push((idx, branch));
        match (c, branch) {
            (Cochain::Degree1 { x_h, .. }, Branch::Hamiltonian) => {
                out_x += &divide_block(x_h.inner(), spectrum, idx, delta);
            }
            (Cochain::Degree1 { y_s, .. }, Branch::Symmetry) => {
                out_x += &divide_block(y_s.inner(), spectrum, idx, delta);
            }
            (Cochain::Degree2 { z }, Branch::Hamiltonian) => {
                out_y += &divide_block(z.inner(), spectrum, idx, delta);
            }
            (Cochain::Degree2 { z }, Branch::Symmetry) => {
                out_x -= &divide_block(z.inner(), spectrum, idx, delta);
            }
            _ => unreachable!(),
        }
    }
    let cochain = match c {
        Cochain::Degree1 { .. } => Cochain::Degree0 {
            w: AntiHermitianMatrix::new_unchecked(out_x),
        },
        _ => Cochain::Degree1 {
            x_h: AntiHermitianMatrix::new_unchecked(out_x),
            y_s: AntiHermitianMatrix::new_unchecked(out_y),
        },
    };
    Ok(HomotopyResult { cochain, branches })
}

/// Real dimensions of `H⁰`, `H¹`, `H²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohomologyMethod {
    Theorem,
    BruteForce,
}

#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub dims: CohomologyDims,
    pub method: CohomologyMethod,
    /// Basis of `H⁰ = Z`. For the theorem this is the commutant basis; for the
    /// brute-force route it is an orthonormal basis of `ker d₀`.
    pub h0_basis: Vec<AntiHermitianMatrix>,
    /// Present for the theorem route only.
    pub commutant: Option<CommutantBasis>,
}

/// `H⁰ ≅ Z`, `H¹ ≅ Z ⊕ Z`, `H² ≅ Z` with `dim Z = Σ n²`.
pub fn cohomology_theorem(spectrum: &JointSpectrum) -> CohomologyReport {
    let basis = commutant_basis(spectrum);
    let z = basis.len();
    CohomologyReport {
        dims: CohomologyDims {
            h0: z,
            h1: 2 * z,
            h2: z,
        },
        method: CohomologyMethod::Theorem,
        h0_basis: basis.elements.clone(),
        commutant: Some(basis),
    }
}

/// Realified `d₀ : u(V) → u(V)²`.
pub fn realified_d0(pair: &SymmetryPair) -> DMatrix<f64> {
    let (h, s) = (pair.h().inner(), pair.s().inner());
    realified_map(pair.dim(), 1, 2, |w| vec![h.bracket(&w[0]), s.bracket(&w[0])])
}

/// Realified `d₁ : u(V)² → u(V)`.
pub fn realified_d1(pair: &SymmetryPair) -> DMatrix<f64> {
    let (h, s) = (pair.h().inner(), pair.s().inner());
    realified_map(pair.dim(), 2, 1, |xy| {
        vec![&h.bracket(&xy[1]) - &s.bracket(&xy[0])]
    })
}

/// Cohomology from the ranks of the realified differentials, without any
/// reference to the spectral decomposition.
pub fn cohomology_bruteforce(pair: &SymmetryPair, rank_tol: f64) -> Result<CohomologyReport> {
    let n = pair.dim();
    let nn = n * n;
    let d0 = realified_d0(pair);
    let d1 = realified_d1(pair);
    let scale = pair.hamiltonian().frobenius_norm() + pair.symmetry().frobenius_norm();
    let r0 = rank_analysis_scaled(&d0, rank_tol, scale)?;
    let r1 = rank_analysis_scaled(&d1, rank_tol, scale)?;
    for (name, r) in [("d0", &r0), ("d1", &r1)] {
        if r.ambiguous {
            return Err(Error::numerical(format!(
                "rank of {name} is ambiguous: singular values within a factor 10 of the cut {:.3e}",
                r.threshold
            )));
        }
    }
    let dims = CohomologyDims {
        h0: nn - r0.rank,
        h1: (2 * nn - r1.rank) - r0.rank,
        h2: nn - r1.rank,
    };

    // ker d₀ from the right singular vectors.
    let svd = real_svd(&d0)?;
    let cut = r0.threshold;
    let mut h0_basis = Vec::new();
    // d₀ is tall (2n² × n²), so V is square and spans the whole domain.
    for i in (0..svd.v.ncols()).filter(|&i| svd.singular_values[i] <= cut) {
        let col: Vec<f64> = svd.v.column(i).iter().copied().collect();
        h0_basis.push(crate::linalg::derealify(&col, n)?);
    }
    if h0_basis.len() != dims.h0 {
        return Err(Error::numerical(format!(
            "kernel basis has {} vectors, rank count gives {}",
            h0_basis.len(),
            dims.h0
        )));
    }
    Ok(CohomologyReport {
        dims,
        method: CohomologyMethod::BruteForce,
        h0_basis,
        commutant: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::linalg::anti_hermitize;
    use crate::spectral::joint_diagonalize;

    fn diag_pair(h: &[f64], s: &[f64]) -> SymmetryPair {
        SymmetryPair::new(
            ComplexMatrix::from_real_diagonal(h).unwrap(),
            ComplexMatrix::from_real_diagonal(s).unwrap(),
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn herm(rows: &[&[f64]]) -> AntiHermitianMatrix {
        anti_hermitize(&ComplexMatrix::from_real_rows(rows).unwrap(), 1e-10).unwrap()
    }

    #[test]
    fn d_of_commutant_element_vanishes() {
        let p = diag_pair(&[1., 1., 0.], &[0., 0., 1.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        for e in commutant_basis(&sp).elements {
            let d = d_abelian(&Cochain::Degree0 { w: e }, &p).unwrap();
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn example_first_order_is_cocycle() {
        let p = diag_pair(&[1., 1., 0.], &[0., 0., 1.]);
        let c = Cochain::Degree1 {
            x_h: herm(&[&[0., 1., 1.], &[1., 0., 0.], &[1., 0., 0.]]),
            y_s: herm(&[&[0., 0., -1.], &[0., 1., 0.], &[-1., 0., 0.]]),
        };
        let d = d_abelian(&c, &p).unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.norm(), 0.0);
    }

    #[test]
    fn top_degree_maps_to_terminal_zero() {
        let p = diag_pair(&[1., 0.], &[0., 1.]);
        let d = d_abelian(&Cochain::zero(2, 2), &p).unwrap();
        assert_eq!(d, Cochain::Terminal { dim: 2 });
        assert!(d_abelian(&Cochain::zero(1, 3), &p).is_err());
    }

    #[test]
    fn homotopy_of_zero_is_zero() {
        let p = diag_pair(&[1., 0.], &[0., 1.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        for deg in [1, 2] {
            let h = homotopy(&Cochain::zero(deg, 2), &sp).unwrap();
            assert_eq!(h.cochain.degree(), deg - 1);
            assert_eq!(h.cochain.norm(), 0.0);
        }
        assert!(homotopy(&Cochain::zero(0, 2), &sp).is_err());
    }

    #[test]
    fn homotopy_degree_two_inverts_ad_h() {
        // Block with λ_ab = 1, μ_αβ = 0.
        let p = diag_pair(&[1., 0.], &[0., 0.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        let z = herm(&[&[0., 2.], &[2., 0.]]);
        let res = homotopy(&Cochain::Degree2 { z: z.clone() }, &sp).unwrap();
        assert_eq!(res.branches, vec![(BlockIndex::new(0, 1), Branch::Hamiltonian)]);
        let Cochain::Degree1 { x_h, y_s } = &res.cochain else {
            panic!()
        };
        assert_eq!(x_h.frobenius_norm(), 0.0);
        let back = p.h().inner().bracket(y_s.inner());
        assert!((&back - z.inner()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn homotopy_rejects_diagonal_components() {
        let p = diag_pair(&[1., 1., 0.], &[0., 0., 1.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        let z = herm(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 0.]]);
        match homotopy(&Cochain::Degree2 { z }, &sp) {
            Err(Error::NotExact { blocks }) => {
                assert_eq!(blocks.len(), 1);
                assert_eq!(blocks[0].block, BlockIndex::new(1, 1));
                assert!((blocks[0].norm - 2f64.sqrt()).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn branch_prefers_larger_difference() {
        let p = diag_pair(&[1., 0., 0.5], &[0., 3., 3.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        // sectors sorted: (0,3), (0.5,3), (1,0)
        assert_eq!(choose_branch(&sp, BlockIndex::new(0, 1)).unwrap().0, Branch::Hamiltonian);
        assert_eq!(choose_branch(&sp, BlockIndex::new(0, 2)).unwrap().0, Branch::Symmetry);
    }

    #[test]
    fn cohomology_examples() {
        let p = diag_pair(&[1., 1., 0.], &[0., 0., 1.]);
        let sp = joint_diagonalize(&p, None).unwrap();
        let expect = CohomologyDims { h0: 5, h1: 10, h2: 5 };
        assert_eq!(cohomology_theorem(&sp).dims, expect);
        let brute = cohomology_bruteforce(&p, 1e-9).unwrap();
        assert_eq!(brute.dims, expect);
        assert_eq!(brute.h0_basis.len(), 5);
        for b in &brute.h0_basis {
            assert!(p.h().inner().bracket(b.inner()).frobenius_norm() < 1e-12);
        }

        let zero = diag_pair(&[0., 0.], &[0., 0.]);
        assert_eq!(
            cohomology_bruteforce(&zero, 1e-9).unwrap().dims,
            CohomologyDims { h0: 4, h1: 8, h2: 4 }
        );

        let nd = diag_pair(&[1., 2., 3., 4.], &[0.; 4]);
        let sp = joint_diagonalize(&nd, None).unwrap();
        assert_eq!(cohomology_theorem(&sp).dims, CohomologyDims { h0: 4, h1: 8, h2: 4 });

        let single = diag_pair(&[2.; 3], &[-1.; 3]);
        let sp = joint_diagonalize(&single, None).unwrap();
        assert_eq!(cohomology_theorem(&sp).dims, CohomologyDims { h0: 9, h1: 18, h2: 9 });
    }
}
