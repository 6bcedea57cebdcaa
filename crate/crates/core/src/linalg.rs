//! Dense complex matrices, the real Lie algebra `u(n)` and its realification.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::input(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::input("matrix dimension must be positive"));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("matrix has non-finite entries"));
        }
        Ok(ComplexMatrix(m))
    }

    /// Builds a matrix from row-major nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::input(format!(
                "row {bad} has length {}, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn zeros(n: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    /// Wraps a matrix that is known to be square and finite.
    pub(crate) fn from_inner(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        ComplexMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Multiplies by the imaginary unit.
    pub fn times_i(&self) -> Self {
        self.scale(C64::new(0.0, 1.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real Frobenius inner product `Re tr(selfᴴ other)`.
    pub fn real_inner(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// `‖A − Aᴴ‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖A + Aᴴ‖_F`.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        (&self.0 + self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    /// `self · other − other · self` without a dimension check.
    pub(crate) fn bracket(&self, other: &Self) -> Self {
        ComplexMatrix(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub(crate) fn sandwich(left: &Self, x: &Self, right: &Self) -> Self {
        ComplexMatrix(&left.0 * &x.0 * &right.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 -= &rhs.0;
    }
}

/// `ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!(
            "commutator of {}x{} and {}x{} matrices",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    Ok(a.bracket(b))
}

/// An element of `u(n)`: a matrix `A` with `A + Aᴴ ≈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiHermitianMatrix(ComplexMatrix);

impl AntiHermitianMatrix {
    /// Accepts `inner` if `‖A + Aᴴ‖_F ≤ tol · max(1, ‖A‖_F)`.
    pub fn new(inner: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = inner.anti_hermiticity_defect();
        if defect > tol * inner.frobenius_norm().max(1.0) {
            return Err(Error::input(format!(
                "matrix is not anti-Hermitian: ‖A + Aᴴ‖_F = {defect:.3e}"
            )));
        }
        Ok(AntiHermitianMatrix(inner))
    }

    /// For matrices that are anti-Hermitian by construction (commutators of
    /// anti-Hermitian matrices, projections of them, ...).
    pub(crate) fn new_unchecked(inner: ComplexMatrix) -> Self {
        AntiHermitianMatrix(inner)
    }

    pub fn zeros(n: usize) -> Self {
        AntiHermitianMatrix(ComplexMatrix::zeros(n))
    }

    pub fn inner(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// The Hermitian observable `−i·A`.
    pub fn to_hermitian(&self) -> ComplexMatrix {
        self.0.scale(C64::new(0.0, -1.0))
    }

    /// `⟨A, B⟩ = −tr(AB)`, which equals the real Frobenius product on `u(n)`.
    pub fn killing_inner(&self, other: &Self) -> f64 {
        self.0.real_inner(&other.0)
    }
}

/// `i·h` for Hermitian `h`.
pub fn anti_hermitize(h: &ComplexMatrix, tol: f64) -> Result<AntiHermitianMatrix> {
    let defect = h.hermiticity_defect();
    if defect > tol * h.frobenius_norm().max(1.0) {
        return Err(Error::input(format!(
            "matrix is not Hermitian: ‖h − hᴴ‖_F = {defect:.3e}"
        )));
    }
    Ok(AntiHermitianMatrix(h.times_i()))
}

/// Orthonormal real basis of `u(n)` under `⟨a,b⟩ = −tr(ab)`:
/// `i·E_kk`, then for each `k < l` the pair `(E_kl − E_lk)/√2`,
/// `i·(E_kl + E_lk)/√2`.
pub fn u_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..n {
        let mut m = DMatrix::zeros(n, n);
        m[(k, k)] = C64::new(0.0, 1.0);
        basis.push(ComplexMatrix(m));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let mut re = DMatrix::zeros(n, n);
            re[(k, l)] = C64::new(s, 0.0);
            re[(l, k)] = C64::new(-s, 0.0);
            basis.push(ComplexMatrix(re));
            let mut im = DMatrix::zeros(n, n);
            im[(k, l)] = C64::new(0.0, s);
            im[(l, k)] = C64::new(0.0, s);
            basis.push(ComplexMatrix(im));
        }
    }
    basis
}

/// Coordinates of the `u(n)` part of `a` in [`u_basis`] order.
///
/// The map is an isometry from `u(n)` with the Frobenius norm onto `ℝ^{n²}`.
pub fn realify(a: &ComplexMatrix) -> DVector<f64> {
    let n = a.dim();
    let m = a.as_matrix();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::zeros(n * n);
    for k in 0..n {
        v[k] = m[(k, k)].im;
    }
    let mut idx = n;
    for k in 0..n {
        for l in (k + 1)..n {
            v[idx] = s * (m[(k, l)].re - m[(l, k)].re);
            v[idx + 1] = s * (m[(k, l)].im + m[(l, k)].im);
            idx += 2;
        }
    }
    v
}

/// Inverse of [`realify`] on `u(n)`.
pub fn derealify(v: &[f64], n: usize) -> Result<AntiHermitianMatrix> {
    if v.len() != n * n {
        return Err(Error::input(format!(
            "expected {} real coordinates for u({n}), got {}",
            n * n,
            v.len()
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(0.0, v[k]);
    }
    let mut idx = n;
    for k in 0..n {
        for l in (k + 1)..n {
            let (x, y) = (v[idx] * s, v[idx + 1] * s);
            m[(k, l)] = C64::new(x, y);
            m[(l, k)] = C64::new(-x, y);
            idx += 2;
        }
    }
    Ok(AntiHermitianMatrix(ComplexMatrix(m)))
}

/// Singular-value summary of a real matrix.
#[derive(Debug, Clone)]
pub struct RankAnalysis {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Some singular value lies within a factor 10 of the threshold.
    pub ambiguous: bool,
}

/// Thin SVD `m = U diag(σ) Vᵀ` with `σ` descending.
#[derive(Debug, Clone)]
pub struct RealSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// Thin SVD backed by faer; nalgebra's implementation is unreliable on the
/// rank-deficient maps with repeated singular values met here.
pub fn real_svd(m: &DMatrix<f64>) -> Result<RealSvd> {
    let fm = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = fm
        .thin_svd()
        .map_err(|e| Error::numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    Ok(RealSvd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        singular_values: (0..s.nrows()).map(|i| s[i]).collect(),
        v: DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    })
}

/// Counts singular values above `tol · σ_max`.
pub fn real_rank(m: &DMatrix<f64>, tol: f64) -> Result<usize> {
    Ok(rank_analysis(m, tol)?.rank)
}

pub fn rank_analysis(m: &DMatrix<f64>, tol: f64) -> Result<RankAnalysis> {
    rank_analysis_scaled(m, tol, 0.0)
}

/// As [`rank_analysis`] with the cut at `tol · max(σ_max, scale)`. A map that
/// is roundoff relative to `scale` then has rank zero.
pub fn rank_analysis_scaled(m: &DMatrix<f64>, tol: f64, scale: f64) -> Result<RankAnalysis> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(RankAnalysis {
            rank: 0,
            singular_values: Vec::new(),
            threshold: 0.0,
            ambiguous: false,
        });
    }
    let sv = real_svd(m)?.singular_values;
    let smax = sv.first().copied().unwrap_or(0.0).max(scale);
    if smax == 0.0 {
        return Ok(RankAnalysis {
            rank: 0,
            singular_values: sv,
            threshold: 0.0,
            ambiguous: false,
        });
    }
    let threshold = tol * smax;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let ambiguous = sv
        .iter()
        .any(|&s| s > threshold / 10.0 && s <= threshold * 10.0);
    Ok(RankAnalysis {
        rank,
        singular_values: sv,
        threshold,
        ambiguous,
    })
}

/// Minimum-norm least-squares solution of `m x = b`, discarding singular
/// values below `rel_eps · σ_max`. Returns `(x, ‖m x − b‖)`.
pub fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>, rel_eps: f64) -> Result<(DVector<f64>, f64)> {
    lstsq_scaled(m, b, rel_eps, 0.0)
}

/// As [`lstsq`] with the cut at `rel_eps · max(σ_max, scale)`.
pub fn lstsq_scaled(m: &DMatrix<f64>, b: &DVector<f64>, rel_eps: f64, scale: f64) -> Result<(DVector<f64>, f64)> {
    if b.len() != m.nrows() {
        return Err(Error::input(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            m.nrows()
        )));
    }
    let svd = real_svd(m)?;
    let smax = svd.singular_values.first().copied().unwrap_or(0.0).max(scale);
    let mut coeffs = svd.u.transpose() * b;
    for (c, &s) in coeffs.iter_mut().zip(&svd.singular_values) {
        *c = if s > rel_eps * smax { *c / s } else { 0.0 };
    }
    let x = &svd.v * coeffs;
    let residual = (m * &x - b).norm();
    Ok((x, residual))
}

/// Real matrix of a real-linear map `u(n)^k → u(n)^m`, built column by column
/// from the action on [`u_basis`] elements.
pub fn realified_map<F>(n: usize, inputs: usize, outputs: usize, map: F) -> DMatrix<f64>
where
    F: Fn(&[ComplexMatrix]) -> Vec<ComplexMatrix>,
{
    let basis = u_basis(n);
    let nn = n * n;
    let zero = ComplexMatrix::zeros(n);
    let mut out = DMatrix::zeros(outputs * nn, inputs * nn);
    for slot in 0..inputs {
        for (b, e) in basis.iter().enumerate() {
            let mut args = vec![zero.clone(); inputs];
            args[slot] = e.clone();
            let image = map(&args);
            debug_assert_eq!(image.len(), outputs);
            for (o, img) in image.iter().enumerate() {
                let coords = realify(img);
                out.view_mut((o * nn, slot * nn + b), (nn, 1))
                    .copy_from(&coords);
            }
        }
    }
    out
}
