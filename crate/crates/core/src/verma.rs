//! `sl(2)` acting on the Verma module `ℂ[x]` of highest weight `λ`, truncated
//! to polynomials of degree `≤ N`, in exact rational arithmetic.
//!
//! ```text
//! e = ∂,   h = −2x∂ + λ,   f = −x²∂ + λx
//! ```
//!
//! Shifting `λ → λ + t` changes `h` by `t` and `f` by `t·x`; that first-order
//! change is a 1-cocycle of the general differential. Truncation breaks the
//! relations only in the top degrees.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cecomplex::general::{d_general, GeneralCochain, LieAlgebraData, LieCoefficient};
use crate::error::{Error, Result};

/// Smallest truncation degree accepted.
pub const MIN_DEGREE: usize = 3;

/// Basis order of `sl(2)`.
pub const E: usize = 0;
pub const H: usize = 1;
pub const F: usize = 2;

/// Dense square matrix over `ℚ`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::from_integer(1.into());
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RationalMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Column `j` as a list of coefficients.
    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    fn column_is_zero(&self, j: usize) -> bool {
        (0..self.n).all(|i| self.get(i, j).is_zero())
    }

    /// Entry of largest absolute value in column `j`.
    fn column_peak(&self, j: usize) -> BigRational {
        (0..self.n)
            .map(|i| self.get(i, j).clone())
            .max_by(|a, b| a.abs().cmp(&b.abs()))
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_struct("RationalMatrix").field("rows", &rows).finish()
    }
}

impl LieCoefficient for RationalMatrix {
    type Scalar = BigRational;

    fn zero_like(&self) -> Self {
        Self::zeros(self.n)
    }

    fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn add_scaled(&mut self, other: &Self, s: &BigRational) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.data
            .iter()
            .map(Self::scalar_magnitude)
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    fn scalar_magnitude(s: &BigRational) -> f64 {
        s.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Operator on polynomials of degree `≤ N`; column `j` is the image of `xʲ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPolyOperator {
    pub trunc_degree: usize,
    pub matrix: RationalMatrix,
}

impl TruncatedPolyOperator {
    /// `p(x) ↦ x·p(x)`, with `x^N ↦ 0`.
    pub fn multiplication(trunc_degree: usize) -> Self {
        Self::from_shift(trunc_degree, 1, |_| int(1))
    }

    /// `xʲ ↦ c(j)·x^{j+shift}` (dropped past the truncation).
    fn from_shift(trunc_degree: usize, shift: isize, c: impl Fn(usize) -> BigRational) -> Self {
        let n = trunc_degree + 1;
        let mut m = RationalMatrix::zeros(n);
        for j in 0..n {
            let target = j as isize + shift;
            if (0..n as isize).contains(&target) {
                m.data[target as usize * n + j] = c(j);
            }
        }
        TruncatedPolyOperator {
            trunc_degree,
            matrix: m,
        }
    }
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::input(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q.is_zero() {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

fn check_degree(trunc_degree: usize, min: usize) -> Result<()> {
    if trunc_degree < min {
        return Err(Error::input(format!(
            "truncation degree must be at least {min}, got {trunc_degree}"
        )));
    }
    Ok(())
}

/// `[e, h, f]` acting on polynomials of degree `≤ N`.
pub fn verma_operators(lambda: &BigRational, trunc_degree: usize) -> Result<[TruncatedPolyOperator; 3]> {
    check_degree(trunc_degree, MIN_DEGREE)?;
    let e = TruncatedPolyOperator::from_shift(trunc_degree, -1, |j| int(j as i64));
    let h = TruncatedPolyOperator::from_shift(trunc_degree, 0, |j| lambda - int(2 * j as i64));
    let f = TruncatedPolyOperator::from_shift(trunc_degree, 1, |j| lambda - int(j as i64));
    Ok([e, h, f])
}

/// `f_ij^k` for `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`, flat as in
/// [`LieAlgebraData::new`].
pub fn sl2_structure_constants() -> Vec<BigRational> {
    let mut f = vec![BigRational::zero(); 27];
    let mut set = |i: usize, j: usize, k: usize, v: i64| {
        f[(i * 3 + j) * 3 + k] = int(v);
        f[(j * 3 + i) * 3 + k] = int(-v);
    };
    set(H, E, E, 2);
    set(H, F, F, -2);
    set(E, F, H, 1);
    f
}

pub fn verma_algebra(lambda: &BigRational, trunc_degree: usize) -> Result<LieAlgebraData<RationalMatrix>> {
    let ops = verma_operators(lambda, trunc_degree)?;
    LieAlgebraData::new(sl2_structure_constants(), ops.map(|o| o.matrix).to_vec())
}

/// Outcome of one commutation relation, column by column.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: &'static str,
    /// Polynomial degrees on which the relation holds exactly.
    pub exact_degrees: Vec<usize>,
    /// `(degree, largest entry of the defect)` where it fails.
    pub violations: Vec<(usize, BigRational)>,
}

impl RelationCheck {
    fn from_defect(relation: &'static str, defect: &RationalMatrix) -> Self {
        let mut exact_degrees = Vec::new();
        let mut violations = Vec::new();
        for j in 0..defect.dim() {
            if defect.column_is_zero(j) {
                exact_degrees.push(j);
            } else {
                violations.push((j, defect.column_peak(j)));
            }
        }
        RelationCheck {
            relation,
            exact_degrees,
            violations,
        }
    }

    /// Holds on every degree strictly below `bound`.
    pub fn exact_below(&self, bound: usize) -> bool {
        self.violations.iter().all(|(j, _)| *j >= bound)
    }
}

/// `[h,e] − 2e`, `[h,f] + 2f` and `[e,f] − h` on the truncated module.
pub fn check_sl2_relations(ops: &[TruncatedPolyOperator; 3]) -> Vec<RelationCheck> {
    let [e, h, f] = ops.clone().map(|o| o.matrix);
    vec![
        RelationCheck::from_defect("[h,e] = 2e", &h.bracket(&e).sub(&e.scale(&int(2)))),
        RelationCheck::from_defect("[h,f] = -2f", &h.bracket(&f).sub(&f.scale(&int(-2)))),
        RelationCheck::from_defect("[e,f] = h", &e.bracket(&f).sub(&h)),
    ]
}

/// Result of applying the differential to a first-order deformation.
#[derive(Debug, Clone)]
pub struct CocycleCheck {
    pub trunc_degree: usize,
    /// Columns where every component of `dω` vanishes.
    pub exact_columns: Vec<usize>,
    pub violating_columns: Vec<usize>,
    /// Every column `≤ N − 2` is exact.
    pub passed: bool,
}

/// `dω` for `ω = c^h δρ(h) + c^f δρ(f)` with `δρ(h) = 1`; `δρ(e) = 0`.
pub fn check_cocycle(
    lambda: &BigRational,
    trunc_degree: usize,
    delta_f: &RationalMatrix,
) -> Result<CocycleCheck> {
    check_degree(trunc_degree, MIN_DEGREE + 1)?;
    let n = trunc_degree + 1;
    if delta_f.dim() != n {
        return Err(Error::input(format!(
            "δρ(f) must act on {n} coefficients, got {}",
            delta_f.dim()
        )));
    }
    let algebra = verma_algebra(lambda, trunc_degree)?;
    let mut components = BTreeMap::new();
    components.insert(vec![H], RationalMatrix::identity(n));
    components.insert(vec![F], delta_f.clone());
    let omega = GeneralCochain::new(1, components)?;
    let d_omega = d_general(&omega, &algebra)?;

    let mut exact_columns = Vec::new();
    let mut violating_columns = Vec::new();
    for j in 0..n {
        if d_omega.components().values().all(|m| m.column_is_zero(j)) {
            exact_columns.push(j);
        } else {
            violating_columns.push(j);
        }
    }
    let passed = violating_columns.iter().all(|&j| j + 2 > trunc_degree);
    Ok(CocycleCheck {
        trunc_degree,
        exact_columns,
        violating_columns,
        passed,
    })
}

/// The derivative of the module in `λ`: `δρ(f) = x`.
pub fn check_deformation_cocycle(lambda: &BigRational, trunc_degree: usize) -> Result<CocycleCheck> {
    check_cocycle(
        lambda,
        trunc_degree,
        &TruncatedPolyOperator::multiplication(trunc_degree).matrix,
    )
}
