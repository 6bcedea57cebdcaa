//! Numerical tolerances.
//!
//! Relative tolerances are fixed numbers; the scale-dependent ones (cluster,
//! obstruction, first-order residual) default to `None` and are resolved
//! against the data of a concrete problem.

/// Default relative hermiticity gate.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Default relative gate on `‖[Ĥ,Ŝ]‖ / (‖Ĥ‖‖Ŝ‖)`.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Default rank cut, relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-9;
/// Cluster tolerance factor applied to the spectral scale.
pub const CLUSTER_FACTOR: f64 = 1e-8;
/// Obstruction tolerance factor applied to the commutator scale.
pub const OBSTRUCTION_FACTOR: f64 = 1e-8;
/// First-order residual factor applied to the cocycle scale.
pub const FIRST_ORDER_FACTOR: f64 = 1e-10;
/// Largest dimension at which the built-in oracles run by default.
pub const ORACLE_MAX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub commute: f64,
    pub rank: f64,
    /// Absolute eigenvalue clustering tolerance; `None` means
    /// `1e-8 · max(spectral range, spectral radius)`.
    pub cluster: Option<f64>,
    /// Absolute obstruction tolerance; `None` means `1e-8 · ‖δ¹Ĥ‖·‖δ¹Ŝ‖`.
    pub obstruction: Option<f64>,
    /// Absolute first-order residual tolerance; `None` means
    /// `1e-10 · (‖Ĥ‖‖δ¹Ŝ‖ + ‖Ŝ‖‖δ¹Ĥ‖)`.
    pub first_order: Option<f64>,
    /// The independent oracles (brute-force cohomology, least-squares
    /// feasibility) run only up to this dimension.
    pub oracle_max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: HERMITICITY_TOL,
            commute: COMMUTE_TOL,
            rank: RANK_TOL,
            cluster: None,
            obstruction: None,
            first_order: None,
            oracle_max_dim: ORACLE_MAX_DIM,
        }
    }
}
