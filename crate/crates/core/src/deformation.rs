//! Order-by-order restoration of the symmetry under a perturbation of the
//! Hamiltonian.
//!
//! Internally everything is anti-Hermitian: `H = iĤ`, `δH = iδĤ` and so on.
//! At order `n` the commutation condition `[H(t), S(t)] = 0` reads
//!
//! ```text
//! [H, δⁿS] − [S, δⁿH] = −Σ_{k=1}^{n−1} [δᵏH, δⁿ⁻ᵏS]
//! ```
//!
//! i.e. `d(δⁿH, δⁿS) = RHSₙ` in the Chevalley-Eilenberg complex. The
//! right-hand side is solvable iff its commutant part vanishes; the commutant
//! part at `n = 2` is the obstruction class.

use nalgebra::DVector;

use crate::cecomplex::{choose_branch, homotopy_off_diagonal, realified_d1, Cochain};
use crate::config::{Tolerances, FIRST_ORDER_FACTOR, OBSTRUCTION_FACTOR};
use crate::error::{BlockNorm, Error, Result};
use crate::linalg::{anti_hermitize, lstsq_scaled, realify, AntiHermitianMatrix, ComplexMatrix};
use crate::spectral::{
    block_project, commutant_basis, joint_diagonalize, CommutantBasis, JointSpectrum, SymmetryPair,
};
use crate::C64;

/// Allowed deviation of the residual log-log slope from `N + 1`.
pub const SLOPE_TOL: f64 = 0.3;

const TAIL_ROUNDOFF: f64 = 1e-12;

/// A perturbation `Ĥ → Ĥ + t δ¹Ĥ` of a symmetric system, optionally with a
/// user-supplied first-order correction `δ¹Ŝ`.
#[derive(Debug, Clone)]
pub struct DeformationProblem {
    pair: SymmetryPair,
    delta_h1: ComplexMatrix,
    delta_s1: Option<ComplexMatrix>,
    tolerances: Tolerances,
    spectrum: JointSpectrum,
    commutant: CommutantBasis,
}

impl DeformationProblem {
    pub fn new(
        pair: SymmetryPair,
        delta_h1: ComplexMatrix,
        delta_s1: Option<ComplexMatrix>,
        tolerances: Tolerances,
    ) -> Result<Self> {
        let n = pair.dim();
        if delta_h1.dim() != n {
            return Err(Error::input(format!(
                "δ¹H is {0}x{0}, expected {n}x{n}",
                delta_h1.dim()
            )));
        }
        anti_hermitize(&delta_h1, tolerances.hermiticity)
            .map_err(|e| e.prefixed("δ¹H"))?;
        if let Some(ds) = &delta_s1 {
            if ds.dim() != n {
                return Err(Error::input(format!("δ¹S is {0}x{0}, expected {n}x{n}", ds.dim())));
            }
            anti_hermitize(ds, tolerances.hermiticity)
                .map_err(|e| e.prefixed("δ¹S"))?;
        }
        let spectrum = joint_diagonalize(&pair, tolerances.cluster)?;
        let commutant = commutant_basis(&spectrum);
        let prob = DeformationProblem {
            pair,
            delta_h1,
            delta_s1,
            tolerances,
            spectrum,
            commutant,
        };
        if let Some(ds) = &prob.delta_s1 {
            let residual = prob.first_order_residual(ds);
            let tol = prob.first_order_tol(ds);
            if residual > tol {
                return Err(Error::input(format!(
                    "supplied δ¹S does not satisfy [H, δ¹S] = [S, δ¹H]: residual {residual:.3e} exceeds {tol:.3e}"
                )));
            }
        }
        Ok(prob)
    }

    pub fn pair(&self) -> &SymmetryPair {
        &self.pair
    }

    pub fn delta_h1(&self) -> &ComplexMatrix {
        &self.delta_h1
    }

    pub fn delta_s1(&self) -> Option<&ComplexMatrix> {
        self.delta_s1.as_ref()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn spectrum(&self) -> &JointSpectrum {
        &self.spectrum
    }

    pub fn commutant(&self) -> &CommutantBasis {
        &self.commutant
    }

    /// `‖[Ĥ, δŜ] − [Ŝ, δĤ]‖_F`.
    pub fn first_order_residual(&self, delta_s1: &ComplexMatrix) -> f64 {
        let lhs = self.pair.hamiltonian().bracket(delta_s1);
        let rhs = self.pair.symmetry().bracket(&self.delta_h1);
        (&lhs - &rhs).frobenius_norm()
    }

    pub fn first_order_tol(&self, delta_s1: &ComplexMatrix) -> f64 {
        self.tolerances.first_order.unwrap_or_else(|| {
            FIRST_ORDER_FACTOR
                * (self.pair.hamiltonian().frobenius_norm() * delta_s1.frobenius_norm()
                    + self.pair.symmetry().frobenius_norm() * self.delta_h1.frobenius_norm())
        })
    }

    pub fn obstruction_tol(&self, delta_s1: &ComplexMatrix) -> f64 {
        self.tolerances.obstruction.unwrap_or_else(|| {
            OBSTRUCTION_FACTOR * self.delta_h1.frobenius_norm() * delta_s1.frobenius_norm()
        })
    }
}

#[derive(Debug, Clone)]
pub struct FirstOrderSolution {
    /// Hermitian `δ¹Ŝ`.
    pub delta_s1: ComplexMatrix,
    /// The correction came from the problem file rather than the solver.
    pub supplied: bool,
    /// `‖[Ĥ, δ¹Ŝ] − [Ŝ, δ¹Ĥ]‖_F`.
    pub residual: f64,
}

/// Solves `[Ĥ, δ¹Ŝ] = [Ŝ, δ¹Ĥ]` block by block, with zero commutant part.
///
/// On an off-diagonal block with `λ_ab ≠ 0` the solution is
/// `(μ_αβ / λ_ab)·δ¹Ĥ_block`; with `λ_ab = 0` the block of `δ¹Ĥ` must vanish.
pub fn solve_first_order(prob: &DeformationProblem) -> Result<FirstOrderSolution> {
    if let Some(ds) = &prob.delta_s1 {
        return Ok(FirstOrderSolution {
            delta_s1: ds.clone(),
            supplied: true,
            residual: prob.first_order_residual(ds),
        });
    }
    let spectrum = &prob.spectrum;
    let n = prob.pair.dim();
    let tol = spectrum.cluster_tol;
    let gate = prob.tolerances.first_order.unwrap_or_else(|| {
        FIRST_ORDER_FACTOR * prob.pair.symmetry().frobenius_norm() * prob.delta_h1.frobenius_norm()
    });
    let mut ds = ComplexMatrix::zeros(n);
    let mut violations = Vec::new();
    for idx in spectrum.off_diagonal_blocks() {
        let block = block_project(&prob.delta_h1, spectrum, idx)?;
        let (dl, dm) = spectrum.eigen_differences(idx);
        if dl.abs() > tol {
            ds += &block.scale_real(dm / dl);
        } else {
            let norm = block.frobenius_norm();
            if dm.abs() * norm > gate {
                violations.push(BlockNorm { block: idx, norm });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::FirstOrderObstructed { blocks: violations });
    }
    let residual = prob.first_order_residual(&ds);
    Ok(FirstOrderSolution {
        delta_s1: ds,
        supplied: false,
        residual,
    })
}

/// The class of `[δ¹H, δ¹S]` in `H² ≅ Z`.
#[derive(Debug, Clone)]
pub struct ObstructionClass {
    /// Commutant part of `[δ¹H, δ¹S]` (anti-Hermitian convention).
    pub representative: AntiHermitianMatrix,
    /// `−i · representative`.
    pub observable: ComplexMatrix,
    /// Coordinates in the commutant basis of the problem.
    pub coefficients: Vec<f64>,
    pub norm: f64,
    pub tolerance: f64,
    pub anomalous: bool,
}

fn class_from(rep: ComplexMatrix, basis: &CommutantBasis, tolerance: f64) -> ObstructionClass {
    let coefficients = basis.coefficients(&rep);
    let norm = rep.frobenius_norm();
    let representative = AntiHermitianMatrix::new_unchecked(rep);
    ObstructionClass {
        observable: representative.to_hermitian(),
        representative,
        coefficients,
        norm,
        tolerance,
        anomalous: norm > tolerance,
    }
}

/// Second-order obstruction of the cocycle `(δ¹Ĥ, δ¹Ŝ)`.
///
/// A zero class means `[Ĥ,δ²Ŝ] + [δ²Ĥ,Ŝ] + [δ¹Ĥ,δ¹Ŝ] = 0` has a solution.
pub fn obstruction_second_order(prob: &DeformationProblem, delta_s1: &ComplexMatrix) -> Result<ObstructionClass> {
    if delta_s1.dim() != prob.pair.dim() {
        return Err(Error::input("δ¹S has the wrong dimension"));
    }
    let residual = prob.first_order_residual(delta_s1);
    let tol = prob.first_order_tol(delta_s1);
    if residual > tol {
        return Err(Error::input(format!(
            "(δ¹H, δ¹S) is not a cocycle: residual {residual:.3e} exceeds {tol:.3e}"
        )));
    }
    let a1 = prob.delta_h1.times_i();
    let b1 = delta_s1.times_i();
    let rep = prob.spectrum.diagonal_part(&a1.bracket(&b1));
    Ok(class_from(rep, &prob.commutant, prob.obstruction_tol(delta_s1)))
}

/// Least-squares residual of `d(δ²H, δ²S) = −[δ¹H, δ¹S]` over
/// `(δ²H, δ²S) ∈ u(V)²`, computed from the realified differential alone.
///
/// Independent of the spectral decomposition; the residual equals the norm of
/// the part of `[δ¹H, δ¹S]` outside the image of `d`.
pub fn second_order_feasibility(pair: &SymmetryPair, delta_h1: &ComplexMatrix, delta_s1: &ComplexMatrix) -> Result<f64> {
    let d1 = realified_d1(pair);
    let source = delta_h1.times_i().bracket(&delta_s1.times_i());
    let rhs: DVector<f64> = -realify(&source);
    let scale = pair.hamiltonian().frobenius_norm() + pair.symmetry().frobenius_norm();
    Ok(lstsq_scaled(&d1, &rhs, 1e-12, scale)?.1)
}

/// Truncated solution `Ĥ(t) = Σ tⁿ δⁿĤ`, `Ŝ(t) = Σ tⁿ δⁿŜ`.
#[derive(Debug, Clone)]
pub struct DeformationSeries {
    pub order: usize,
    /// Hermitian `δⁿĤ`, `n = 0..=order` (`δ⁰Ĥ = Ĥ`).
    pub h_coeffs: Vec<ComplexMatrix>,
    pub s_coeffs: Vec<ComplexMatrix>,
    pub gauge: String,
    /// Off-diagonal `w` with `d(w)` the coboundary part of the first order;
    /// the series is `e^{−tw}(H + t·z_H + …)e^{tw}`.
    pub gauge_generator: AntiHermitianMatrix,
    /// `‖Σ_{k+j=m} [δᵏĤ, δʲŜ]‖_F` for `m = 0..=order`; all should vanish.
    pub order_residuals: Vec<f64>,
    /// `(t, ‖[Ĥ(t), Ŝ(t)]‖_F)` restricted to the orders above the truncation.
    pub residual_profile: Vec<(f64, f64)>,
    /// Least-squares log-log slope of the profile; `None` if it vanishes
    /// identically.
    pub residual_slope: Option<f64>,
}

impl DeformationSeries {
    pub fn hamiltonian_at(&self, t: f64) -> ComplexMatrix {
        eval_poly(&self.h_coeffs, t)
    }

    pub fn symmetry_at(&self, t: f64) -> ComplexMatrix {
        eval_poly(&self.s_coeffs, t)
    }

    /// `‖[Ĥ(t), Ŝ(t)]‖_F` evaluated directly.
    pub fn commutator_residual(&self, t: f64) -> f64 {
        self.hamiltonian_at(t).bracket(&self.symmetry_at(t)).frobenius_norm()
    }

    /// Contribution of orders `> N` to `‖[Ĥ(t), Ŝ(t)]‖_F`; free of the
    /// rounding floor of the low orders. A tail coefficient at roundoff
    /// relative to `Σ ‖δᵏĤ‖‖δʲŜ‖` counts as zero.
    pub fn truncation_residual(&self, t: f64) -> f64 {
        let n = self.order;
        let hn: Vec<f64> = self.h_coeffs.iter().map(|c| c.frobenius_norm()).collect();
        let sn: Vec<f64> = self.s_coeffs.iter().map(|c| c.frobenius_norm()).collect();
        let mut acc = ComplexMatrix::zeros(self.h_coeffs[0].dim());
        for m in (n + 1)..=(2 * n) {
            let c = cauchy_commutator(&self.h_coeffs, &self.s_coeffs, m);
            let scale: f64 = ((m - n)..=n).map(|k| hn[k] * sn[m - k]).sum();
            if c.frobenius_norm() > TAIL_ROUNDOFF * scale {
                acc += &c.scale_real(t.powi(m as i32));
            }
        }
        acc.frobenius_norm()
    }
}

fn eval_poly(coeffs: &[ComplexMatrix], t: f64) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(coeffs[0].dim());
    for c in coeffs.iter().rev() {
        acc = &acc.scale_real(t) + c;
    }
    acc
}

/// `Σ_{k+j=m, 0≤k,j≤N} [a_k, b_j]`.
fn cauchy_commutator(a: &[ComplexMatrix], b: &[ComplexMatrix], m: usize) -> ComplexMatrix {
    let top = a.len() - 1;
    let mut acc = ComplexMatrix::zeros(a[0].dim());
    for k in m.saturating_sub(top)..=m.min(top) {
        acc += &a[k].bracket(&b[m - k]);
    }
    acc
}

#[derive(Debug, Clone)]
pub enum SeriesOutcome {
    Series(DeformationSeries),
    Obstructed { order: usize, class: ObstructionClass },
}

/// Sample points for the residual profile: nine points log-spaced over
/// `[1e-3, 1e-1]`.
pub fn profile_times() -> Vec<f64> {
    (0..9).map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / 8.0)).collect()
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(t, r)| (t.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Taylor coefficients of `e^{−tw} X(t) e^{tw}` for `X(t) = Σ tʲ x_j`,
/// truncated at the length of `x`.
fn conjugate_series(x: &[ComplexMatrix], w: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let order = x.len() - 1;
    let mut out = vec![ComplexMatrix::zeros(w.dim()); order + 1];
    for (j, xj) in x.iter().enumerate() {
        // (ad_{−w})ᵏ x_j / k!, with ad_{−w}(X) = [X, w]
        let mut term = xj.clone();
        for k in 0..=(order - j) {
            out[j + k] += &term;
            term = term.bracket(w).scale_real(1.0 / (k + 1) as f64);
        }
    }
    out
}

/// Continues the deformation to order `order`.
///
/// The first order splits as `(z_H, z_S) + d(w)` with `z` in the commutant
/// and `w` off-diagonal. The recursion runs on `(z_H, z_S)`: orders `n ≥ 2`
/// come from the contracting homotopy with zero commutant component, and a
/// commutant part of the order-`n` right-hand side above tolerance is an
/// obstruction. The result is then conjugated by `e^{tw}`, which restores the
/// given first order and preserves commutation order by order.
///
/// Running the recursion directly on a first order with a coboundary part
/// produces commutant components at orders `≥ 3` that are removable only by
/// re-gauging lower orders, with small divisors when `z_H` has close
/// eigenvalues inside a sector.
pub fn continue_series(prob: &DeformationProblem, order: usize) -> Result<SeriesOutcome> {
    if order < 2 {
        return Err(Error::input(format!("series order must be at least 2, got {order}")));
    }
    let first = solve_first_order(prob)?;
    let class = obstruction_second_order(prob, &first.delta_s1)?;
    if class.anomalous {
        return Ok(SeriesOutcome::Obstructed { order: 2, class });
    }

    let spectrum = &prob.spectrum;
    let basis = &prob.commutant;
    let n = prob.pair.dim();
    let a1 = prob.delta_h1.times_i();
    let b1 = first.delta_s1.times_i();
    let (z_h, z_s) = (spectrum.diagonal_part(&a1), spectrum.diagonal_part(&b1));
    let coboundary = Cochain::Degree1 {
        x_h: AntiHermitianMatrix::new_unchecked(&a1 - &z_h),
        y_s: AntiHermitianMatrix::new_unchecked(&b1 - &z_s),
    };
    let Cochain::Degree0 { w } = homotopy_off_diagonal(&coboundary, spectrum)?.cochain else {
        return Err(Error::numerical("homotopy returned a cochain of the wrong degree"));
    };

    // anti-Hermitian coefficients a_k = iδᵏĤ, b_k = iδᵏŜ
    let mut a = vec![prob.pair.h().inner().clone(), z_h];
    let mut b = vec![prob.pair.s().inner().clone(), z_s];

    // Unsigned magnitude envelope of order k, before cancellations. Roundoff
    // in a coefficient that cancels to zero is relative to this, not to the
    // coefficient itself.
    let min_gap = spectrum
        .off_diagonal_blocks()
        .map(|idx| choose_branch(spectrum, idx).map(|(_, d)| d.abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let mut envelope = vec![0.0, a1.frobenius_norm() + b1.frobenius_norm()];

    for m in 2..=order {
        let mut source = ComplexMatrix::zeros(n);
        let mut scale = 0.0;
        for k in 1..m {
            source += &a[k].bracket(&b[m - k]);
            scale += envelope[k] * envelope[m - k];
        }
        let tol = if m == 2 {
            class.tolerance
        } else {
            prob.tolerances.obstruction.unwrap_or(OBSTRUCTION_FACTOR * scale)
        };
        let diag = spectrum.diagonal_part(&source);
        if diag.frobenius_norm() > tol {
            let class = class_from(diag, basis, tol);
            return Ok(SeriesOutcome::Obstructed { order: m, class });
        }
        let rhs = Cochain::Degree2 {
            z: AntiHermitianMatrix::new_unchecked(-&source),
        };
        let solved = homotopy_off_diagonal(&rhs, spectrum)?;
        let Cochain::Degree1 { x_h, y_s } = solved.cochain else {
            return Err(Error::numerical("homotopy returned a cochain of the wrong degree"));
        };
        let bound = if min_gap.is_finite() { scale / min_gap } else { 0.0 };
        envelope.push(x_h.frobenius_norm() + y_s.frobenius_norm() + bound);
        a.push(x_h.into_inner());
        b.push(y_s.into_inner());
    }

    let minus_i = C64::new(0.0, -1.0);
    let h_coeffs: Vec<ComplexMatrix> = conjugate_series(&a, w.inner()).iter().map(|x| x.scale(minus_i)).collect();
    let s_coeffs: Vec<ComplexMatrix> = conjugate_series(&b, w.inner()).iter().map(|x| x.scale(minus_i)).collect();
    let order_residuals = (0..=order)
        .map(|m| cauchy_commutator(&h_coeffs, &s_coeffs, m).frobenius_norm())
        .collect();
    let mut series = DeformationSeries {
        order,
        h_coeffs,
        s_coeffs,
        gauge: "homotopy on the commutant part, conjugated by exp(t w)".to_string(),
        gauge_generator: w,
        order_residuals,
        residual_profile: Vec::new(),
        residual_slope: None,
    };
    series.residual_profile = profile_times()
        .into_iter()
        .map(|t| (t, series.truncation_residual(t)))
        .collect();
    series.residual_slope = loglog_slope(&series.residual_profile);
    if let Some(slope) = series.residual_slope {
        let expected = (order + 1) as f64;
        if slope < expected - SLOPE_TOL {
            return Err(Error::numerical(format!(
                "truncation residual scales with slope {slope:.3}, expected at least {:.1}",
                expected - SLOPE_TOL
            )));
        }
    }
    Ok(SeriesOutcome::Series(series))
}

#[derive(Debug, Clone)]
pub struct SectorSummary {
    pub lambda: f64,
    pub mu: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub enum FirstOrderOutcome {
    Solved(FirstOrderSolution),
    Obstructed(Vec<BlockNorm>),
}

/// Everything the pipeline learns about one problem.
#[derive(Debug, Clone)]
pub struct AnomalyReport {
    pub sectors: Vec<SectorSummary>,
    pub cluster_tol: f64,
    pub cohomology_theorem: crate::cecomplex::CohomologyDims,
    /// `None` above the oracle size threshold.
    pub cohomology_bruteforce: Option<crate::cecomplex::CohomologyDims>,
    pub first_order: FirstOrderOutcome,
    pub obstruction: Option<ObstructionClass>,
    /// Least-squares residual of the second-order equation (oracle).
    pub feasibility_residual: Option<f64>,
    pub nondegenerate: bool,
    pub anomaly: bool,
}

/// Spectrum, cohomology (both routes), first order and obstruction in one go.
pub fn anomaly_report(prob: &DeformationProblem) -> Result<AnomalyReport> {
    use crate::cecomplex::{cohomology_bruteforce, cohomology_theorem};

    let spectrum = &prob.spectrum;
    let run_oracles = prob.pair.dim() <= prob.tolerances.oracle_max_dim;
    let theorem = cohomology_theorem(spectrum).dims;
    let brute = if run_oracles {
        let dims = cohomology_bruteforce(&prob.pair, prob.tolerances.rank)?.dims;
        if dims != theorem {
            return Err(Error::numerical(format!(
                "cohomology oracle mismatch: theorem {theorem:?}, brute force {dims:?}"
            )));
        }
        Some(dims)
    } else {
        None
    };

    let sectors = spectrum
        .sectors
        .iter()
        .map(|s| SectorSummary {
            lambda: s.lambda,
            mu: s.mu,
            multiplicity: s.multiplicity,
        })
        .collect();
    let nondegenerate = spectrum.is_nondegenerate();

    let (first_order, obstruction, feasibility_residual) = match solve_first_order(prob) {
        Ok(sol) => {
            let class = obstruction_second_order(prob, &sol.delta_s1)?;
            let feas = if run_oracles {
                let r = second_order_feasibility(&prob.pair, &prob.delta_h1, &sol.delta_s1)?;
                if class.anomalous && r < class.norm - 1e-8 {
                    return Err(Error::numerical(format!(
                        "least-squares residual {r:.3e} is below the class norm {:.3e}",
                        class.norm
                    )));
                }
                Some(r)
            } else {
                None
            };
            (FirstOrderOutcome::Solved(sol), Some(class), feas)
        }
        Err(Error::FirstOrderObstructed { blocks }) => (FirstOrderOutcome::Obstructed(blocks), None, None),
        Err(e) => return Err(e),
    };
    let anomaly = obstruction.as_ref().is_some_and(|c| c.anomalous);
    if nondegenerate && anomaly {
        return Err(Error::numerical(
            "nonzero obstruction for a nondegenerate spectrum; the commutant is abelian",
        ));
    }
    Ok(AnomalyReport {
        sectors,
        cluster_tol: spectrum.cluster_tol,
        cohomology_theorem: theorem,
        cohomology_bruteforce: brute,
        first_order,
        obstruction,
        feasibility_residual,
        nondegenerate,
        anomaly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SymmetryPair;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn example(delta_s1: Option<ComplexMatrix>) -> DeformationProblem {
        let pair = SymmetryPair::new(
            ComplexMatrix::from_real_diagonal(&[1., 1., 0.]).unwrap(),
            ComplexMatrix::from_real_diagonal(&[0., 0., 1.]).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let dh = m(&[&[0., 1., 1.], &[1., 0., 0.], &[1., 0., 0.]]);
        DeformationProblem::new(pair, dh, delta_s1, Tolerances::default()).unwrap()
    }

    fn reference_ds() -> ComplexMatrix {
        m(&[&[0., 0., -1.], &[0., 1., 0.], &[-1., 0., 0.]])
    }

    #[test]
    fn first_order_solver_gauge() {
        let sol = solve_first_order(&example(None)).unwrap();
        let want = m(&[&[0., 0., -1.], &[0., 0., 0.], &[-1., 0., 0.]]);
        assert!((&sol.delta_s1 - &want).frobenius_norm() < 1e-12);
        assert!(sol.residual < 1e-12);
        // differs from the reference choice by E₂₂, which lies in the commutant
        let diff = &reference_ds() - &sol.delta_s1;
        let spec = example(None);
        let z = spec.spectrum().diagonal_part(&diff);
        assert!((&z - &diff).frobenius_norm() < 1e-12);
    }

    #[test]
    fn reference_correction_is_accepted_verbatim() {
        let prob = example(Some(reference_ds()));
        let sol = solve_first_order(&prob).unwrap();
        assert!(sol.supplied);
        assert_eq!(sol.delta_s1, reference_ds());
        assert!(sol.residual <= 1e-12);
    }

    #[test]
    fn bad_correction_is_rejected() {
        let pair = example(None).pair().clone();
        let dh = example(None).delta_h1().clone();
        let bad = ComplexMatrix::identity(3);
        let err = DeformationProblem::new(pair, dh, Some(bad), Tolerances::default()).unwrap_err();
        assert!(err.is_validation());
    }

    #[test]
    fn three_level_example_is_obstructed() {
        let prob = example(Some(reference_ds()));
        let class = obstruction_second_order(&prob, &reference_ds()).unwrap();
        assert!(class.anomalous);
        assert!((class.norm - 2f64.sqrt()).abs() < 1e-10);
        // anti-Hermitian convention: p([iδĤ, iδŜ]) = −p([δĤ, δŜ])
        let want = m(&[&[0., -1., 0.], &[1., 0., 0.], &[0., 0., 0.]]);
        assert!((class.representative.inner() - &want).frobenius_norm() < 1e-12);
        let feas = second_order_feasibility(prob.pair(), prob.delta_h1(), &reference_ds()).unwrap();
        assert!(feas >= 1.4, "{feas}");
    }

    #[test]
    fn commutant_shift_of_solver_gauge_reproduces_reference_class() {
        let prob = example(None);
        let sol = solve_first_order(&prob).unwrap();
        // the solver's δ¹Ŝ has no commutant part and no anomaly
        assert!(!obstruction_second_order(&prob, &sol.delta_s1).unwrap().anomalous);
        let e22 = ComplexMatrix::from_real_diagonal(&[0., 1., 0.]).unwrap();
        let shifted = &sol.delta_s1 + &e22;
        let a = obstruction_second_order(&prob, &shifted).unwrap();
        let b = obstruction_second_order(&prob, &reference_ds()).unwrap();
        assert!((a.representative.inner() - b.representative.inner()).frobenius_norm() < 1e-9);
    }

    #[test]
    fn series_stops_at_second_order() {
        match continue_series(&example(Some(reference_ds())), 2).unwrap() {
            SeriesOutcome::Obstructed { order, class } => {
                assert_eq!(order, 2);
                assert!((class.norm - 2f64.sqrt()).abs() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_level_first_order() {
        let pair = SymmetryPair::new(
            ComplexMatrix::from_real_diagonal(&[1., 0.]).unwrap(),
            ComplexMatrix::from_real_diagonal(&[0., 1.]).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let dh = m(&[&[0., 1.], &[1., 0.]]);
        let prob = DeformationProblem::new(pair, dh, None, Tolerances::default()).unwrap();
        let sol = solve_first_order(&prob).unwrap();
        assert!((&sol.delta_s1 - &m(&[&[0., -1.], &[-1., 0.]])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn first_order_obstruction_when_energies_coincide() {
        let pair = SymmetryPair::new(
            ComplexMatrix::identity(2),
            ComplexMatrix::from_real_diagonal(&[0., 1.]).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let dh = m(&[&[0., 1.], &[1., 0.]]);
        let prob = DeformationProblem::new(pair, dh, None, Tolerances::default()).unwrap();
        match solve_first_order(&prob) {
            Err(Error::FirstOrderObstructed { blocks }) => {
                assert_eq!(blocks.len(), 1);
                assert!((blocks[0].norm - 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cartan_perturbation_series_is_exact() {
        let pair = SymmetryPair::new(
            ComplexMatrix::from_real_diagonal(&[1., 1., 0.]).unwrap(),
            ComplexMatrix::from_real_diagonal(&[1., 1., 2.]).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let dh = ComplexMatrix::from_real_diagonal(&[0.3, -0.2, 0.7]).unwrap();
        let ds = ComplexMatrix::from_real_diagonal(&[1.0, 0.5, -0.4]).unwrap();
        let prob = DeformationProblem::new(pair, dh, Some(ds), Tolerances::default()).unwrap();
        let SeriesOutcome::Series(series) = continue_series(&prob, 4).unwrap() else {
            panic!("obstructed")
        };
        assert!(series.h_coeffs[2..].iter().all(|c| c.frobenius_norm() == 0.0));
        assert_eq!(series.commutator_residual(0.1), 0.0);
        assert!(series.residual_slope.is_none());
    }

    #[test]
    fn zero_perturbation() {
        let prob = DeformationProblem::new(
            example(None).pair().clone(),
            ComplexMatrix::zeros(3),
            None,
            Tolerances::default(),
        )
        .unwrap();
        let report = anomaly_report(&prob).unwrap();
        assert!(!report.anomaly);
        let FirstOrderOutcome::Solved(sol) = &report.first_order else { panic!() };
        assert_eq!(sol.delta_s1.frobenius_norm(), 0.0);
    }

    #[test]
    fn report_on_three_level() {
        let report = anomaly_report(&example(Some(reference_ds()))).unwrap();
        assert!(report.anomaly);
        assert_eq!(report.sectors.len(), 2);
        assert_eq!(report.cohomology_bruteforce, Some(report.cohomology_theorem));
        assert!(report.feasibility_residual.unwrap() >= 1.4);
    }

    #[test]
    fn profile_spans_two_decades() {
        let t = profile_times();
        assert_eq!(t.len(), 9);
        assert!((t[0] - 1e-3).abs() < 1e-15 && (t[8] - 1e-1).abs() < 1e-15);
    }
}
