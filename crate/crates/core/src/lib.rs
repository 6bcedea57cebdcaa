//! Perturbative anomalies of finite-dimensional quantum systems.
//!
//! A Hamiltonian `Ĥ` and a conserved charge `Ŝ` form a unitary representation
//! of the abelian Lie algebra `ℝ²` on `V = ℂⁿ`. Deformations of the pair are
//! governed by the Chevalley-Eilenberg complex of `ℝ²` with coefficients in
//! `u(V)`:
//!
//! * [`spectral`] splits `V` into joint eigenspaces and builds the commutant `Z`,
//! * [`cecomplex`] implements the complex, its contracting homotopy on the
//!   off-diagonal blocks, and cohomology computed two independent ways,
//! * [`deformation`] restores the symmetry order by order and reports the
//!   second-order obstruction class in `H² ≅ Z`,
//! * [`verma`] is an exact-arithmetic `sl(2)` test bed for the general
//!   (non-abelian) differential.

pub mod cecomplex;
pub mod config;
pub mod deformation;
pub mod error;
pub mod linalg;
pub mod random;
pub mod spectral;
pub mod verma;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{AntiHermitianMatrix, ComplexMatrix};
pub use nalgebra::Complex;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
