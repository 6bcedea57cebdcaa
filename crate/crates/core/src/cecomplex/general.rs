//! Chevalley-Eilenberg differential for an arbitrary finite-dimensional Lie
//! algebra with coefficients in `End(V)`:
//!
//! ```text
//! d = c^i ad_{ρ(e_i)} − ½ f_ij^k c^i c^j ∂/∂c^k
//! ```
//!
//! The generators `c^i` anticommute and `∂/∂c^k` is a left derivation. The
//! implementation is generic over the coefficient type so the same code path
//! serves floating-point matrices and exact rational operators.

use std::collections::BTreeMap;
use std::ops::Neg;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::spectral::StructureConstants;

/// Largest Lie algebra dimension accepted by [`d_general`].
pub const MAX_ALGEBRA_DIM: usize = 8;

/// Matrix-like values a cochain can take.
pub trait LieCoefficient: Clone {
    type Scalar: Clone + Zero + One + Neg<Output = Self::Scalar>;

    fn zero_like(&self) -> Self;
    fn bracket(&self, other: &Self) -> Self;
    /// `self += s · other`.
    fn add_scaled(&mut self, other: &Self, s: &Self::Scalar);
    /// Size used for tolerance checks; zero iff the value is zero.
    fn magnitude(&self) -> f64;
    fn scalar_magnitude(s: &Self::Scalar) -> f64;
}

impl LieCoefficient for ComplexMatrix {
    type Scalar = f64;

    fn zero_like(&self) -> Self {
        ComplexMatrix::zeros(self.dim())
    }

    fn bracket(&self, other: &Self) -> Self {
        ComplexMatrix::bracket(self, other)
    }

    fn add_scaled(&mut self, other: &Self, s: &f64) {
        *self += &other.scale_real(*s);
    }

    fn magnitude(&self) -> f64 {
        self.frobenius_norm()
    }

    fn scalar_magnitude(s: &f64) -> f64 {
        s.abs()
    }
}

/// Structure constants and a representation `ρ(e_i)`.
#[derive(Debug, Clone)]
pub struct LieAlgebraData<M: LieCoefficient> {
    dim_g: usize,
    f: Vec<M::Scalar>,
    rep: Vec<M>,
}

impl<M: LieCoefficient> LieAlgebraData<M> {
    /// `f` is indexed `f[(i·dim + j)·dim + k] = f_ij^k` and must be
    /// antisymmetric in `(i, j)`.
    pub fn new(f: Vec<M::Scalar>, rep: Vec<M>) -> Result<Self> {
        let dim_g = rep.len();
        if dim_g == 0 || dim_g > MAX_ALGEBRA_DIM {
            return Err(Error::input(format!(
                "Lie algebra dimension must be in 1..={MAX_ALGEBRA_DIM}, got {dim_g}"
            )));
        }
        if f.len() != dim_g.pow(3) {
            return Err(Error::input(format!(
                "expected {} structure constants, got {}",
                dim_g.pow(3),
                f.len()
            )));
        }
        let scale = f.iter().map(M::scalar_magnitude).fold(0.0, f64::max);
        for i in 0..dim_g {
            for j in 0..dim_g {
                for k in 0..dim_g {
                    let a = &f[(i * dim_g + j) * dim_g + k];
                    let b = &f[(j * dim_g + i) * dim_g + k];
                    if M::scalar_magnitude(&(a.clone() + b.clone())) > 1e-12 * scale {
                        return Err(Error::input(format!(
                            "structure constants not antisymmetric at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(LieAlgebraData { dim_g, f, rep })
    }

    pub fn dim(&self) -> usize {
        self.dim_g
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &M::Scalar {
        &self.f[(i * self.dim_g + j) * self.dim_g + k]
    }

    pub fn rep(&self) -> &[M] {
        &self.rep
    }

    /// `max_ij magnitude([ρ_i, ρ_j] − Σ_k f_ij^k ρ_k)`.
    pub fn representation_violation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim_g {
            for j in 0..self.dim_g {
                let mut r = self.rep[i].bracket(&self.rep[j]);
                for k in 0..self.dim_g {
                    r.add_scaled(&self.rep[k], &-self.structure_constant(i, j, k).clone());
                }
                worst = worst.max(r.magnitude());
            }
        }
        worst
    }
}

impl LieAlgebraData<ComplexMatrix> {
    pub fn structure_constants(&self) -> StructureConstants {
        StructureConstants::from_fn(self.dim_g, |i, j, k| *self.structure_constant(i, j, k))
    }
}

/// Cochain `Σ_I c^{i_1} ⋯ c^{i_p} ω_I` with strictly increasing index tuples.
#[derive(Debug, Clone)]
pub struct GeneralCochain<M> {
    degree: usize,
    components: BTreeMap<Vec<usize>, M>,
}

impl<M: LieCoefficient> GeneralCochain<M> {
    pub fn new(degree: usize, components: BTreeMap<Vec<usize>, M>) -> Result<Self> {
        for idx in components.keys() {
            if idx.len() != degree {
                return Err(Error::input(format!(
                    "index tuple {idx:?} does not have length {degree}"
                )));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::input(format!(
                    "index tuple {idx:?} is not strictly increasing"
                )));
            }
        }
        Ok(GeneralCochain { degree, components })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, M> {
        &self.components
    }

    pub fn component(&self, idx: &[usize]) -> Option<&M> {
        self.components.get(idx)
    }

    /// Largest component magnitude (0 for the empty cochain).
    pub fn max_magnitude(&self) -> f64 {
        self.components.values().map(|m| m.magnitude()).fold(0.0, f64::max)
    }

    fn accumulate(&mut self, idx: Vec<usize>, value: &M, s: &M::Scalar) {
        self.components
            .entry(idx)
            .or_insert_with(|| value.zero_like())
            .add_scaled(value, s);
    }
}

fn signed<S: Clone + Neg<Output = S>>(s: &S, negative: bool) -> S {
    if negative {
        -s.clone()
    } else {
        s.clone()
    }
}

/// Inserts `i` into the sorted tuple; returns the new tuple and whether the
/// reordering sign is negative. `None` if `i` is already present.
fn insert_front(idx: &[usize], i: usize) -> Option<(Vec<usize>, bool)> {
    if idx.contains(&i) {
        return None;
    }
    let pos = idx.iter().filter(|&&k| k < i).count();
    let mut out = idx.to_vec();
    out.insert(pos, i);
    Some((out, pos % 2 == 1))
}

/// Applies the Chevalley-Eilenberg differential.
pub fn d_general<M: LieCoefficient>(
    c: &GeneralCochain<M>,
    g: &LieAlgebraData<M>,
) -> Result<GeneralCochain<M>> {
    let n = g.dim();
    if c.degree >= n {
        return Err(Error::input(format!(
            "degree {} cochain has no image in a {n}-dimensional algebra",
            c.degree
        )));
    }
    if let Some(bad) = c.components.keys().find(|idx| idx.iter().any(|&k| k >= n)) {
        return Err(Error::input(format!("index tuple {bad:?} out of range for dimension {n}")));
    }

    let mut out = GeneralCochain {
        degree: c.degree + 1,
        components: BTreeMap::new(),
    };
    let one = M::Scalar::one();

    for (idx, omega) in &c.components {
        // c^i ad_{ρ(e_i)}
        for i in 0..n {
            if let Some((target, negative)) = insert_front(idx, i) {
                let term = g.rep[i].bracket(omega);
                out.accumulate(target, &term, &signed(&one, negative));
            }
        }

        // −½ f_ij^k c^i c^j ∂/∂c^k, summed as −f_ij^k c^i c^j ∂/∂c^k over i < j.
        for (r, &k) in idx.iter().enumerate() {
            let mut rest = idx.clone();
            rest.remove(r);
            let deriv_neg = r % 2 == 1;
            for i in 0..n {
                if rest.contains(&i) {
                    continue;
                }
                for j in (i + 1)..n {
                    let fk = g.structure_constant(i, j, k);
                    if fk.is_zero() {
                        continue;
                    }
                    let Some((with_j, neg_j)) = insert_front(&rest, j) else {
                        continue;
                    };
                    // c^i passes only the elements below i; j > i is not among them.
                    let pos_i = rest.iter().filter(|&&x| x < i).count();
                    let mut target = with_j;
                    target.insert(pos_i, i);
                    let negative = !(deriv_neg ^ neg_j ^ (pos_i % 2 == 1));
                    out.accumulate(target, omega, &signed(fk, negative));
                }
            }
        }
    }
    Ok(out)
}
