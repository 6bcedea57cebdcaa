//! Serializable reports. Field order is fixed by the struct definitions, so
//! output is byte-identical across runs.

use serde::Serialize;

use crate::problem::{MatrixJson, ProblemFile};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Spectrum(SpectrumReport),
    Cohomology(CohomologyReport),
    Anomaly(Box<AnomalyReport>),
    VermaCheck(VermaReport),
}

impl Report {
    /// Failed self-checks; a nonempty list means exit code 3.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Report::Cohomology(r) => {
                if r.agree == Some(false) {
                    out.push(format!(
                        "cohomology oracle mismatch: theorem {:?}, brute force {:?}",
                        r.theorem, r.brute_force
                    ));
                }
            }
            Report::Anomaly(r) => {
                if let Some(g) = &r.gauge_check {
                    if !g.passed {
                        out.push(format!(
                            "gauge self-check failed: class moved by {:.3e} (tolerance {:.3e})",
                            g.class_difference, g.tolerance
                        ));
                    }
                }
            }
            Report::VermaCheck(r) => {
                if !r.cocycle.passed {
                    out.push(format!(
                        "weight derivative is not a cocycle below degree {}: violating columns {:?}",
                        r.degree - 1,
                        r.cocycle.violating_columns
                    ));
                }
                if r.negative_control.passed {
                    out.push("negative control x² passed the cocycle check".into());
                }
                for rel in r.relations.iter().filter(|rel| !rel.exact_below_truncation) {
                    out.push(format!("relation {} fails below the truncation degree", rel.relation));
                }
            }
            Report::Spectrum(_) => {}
        }
        out
    }
}

/// Tolerances actually used, with the scale-dependent ones resolved.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveTolerances {
    pub hermiticity: f64,
    pub commute: f64,
    pub rank: f64,
    pub cluster: f64,
    pub obstruction: Option<f64>,
    pub first_order: Option<f64>,
    pub oracle_max_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorJson {
    pub lambda: f64,
    pub mu: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimsJson {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl From<anomaly_core::cecomplex::CohomologyDims> for DimsJson {
    fn from(d: anomaly_core::cecomplex::CohomologyDims) -> Self {
        DimsJson {
            h0: d.h0,
            h1: d.h1,
            h2: d.h2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub tolerances: EffectiveTolerances,
    pub input: ProblemFile,
    pub sectors: Vec<SectorJson>,
    pub nondegenerate: bool,
    pub commutant_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyReport {
    pub tolerances: EffectiveTolerances,
    pub input: ProblemFile,
    pub method: String,
    pub theorem: Option<DimsJson>,
    pub brute_force: Option<DimsJson>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockJson {
    pub first: usize,
    pub second: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstOrderJson {
    /// `"solved"` or `"obstructed"`.
    pub status: String,
    #[serde(rename = "delta_S1")]
    pub delta_s1: Option<MatrixJson>,
    pub supplied: Option<bool>,
    pub residual: Option<f64>,
    /// Off-diagonal blocks with `λ_ab = 0 ≠ μ_ab` on which `δ¹Ĥ` is nonzero.
    pub blocks: Vec<BlockJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassJson {
    pub order: usize,
    /// Anti-Hermitian representative in `Z`.
    pub representative: MatrixJson,
    /// Hermitian observable `−i·representative`.
    pub observable: MatrixJson,
    pub coefficients: Vec<f64>,
    pub norm: f64,
    pub tolerance: f64,
    pub anomalous: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesJson {
    pub order: usize,
    pub gauge: String,
    /// Anti-Hermitian off-diagonal `w`; the series is conjugated by `e^{tw}`.
    pub gauge_generator: MatrixJson,
    /// `δᵏĤ` for `k = 0..=order`; entry 0 is `Ĥ`.
    #[serde(rename = "delta_H")]
    pub delta_h: Vec<MatrixJson>,
    #[serde(rename = "delta_S")]
    pub delta_s: Vec<MatrixJson>,
    pub order_residuals: Vec<f64>,
    /// `[t, ‖tail residual‖]` pairs.
    pub residual_profile: Vec<[f64; 2]>,
    pub residual_slope: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeCheckJson {
    pub seed: u64,
    pub shift_norm: f64,
    pub class_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnomalyReport {
    pub tolerances: EffectiveTolerances,
    pub input: ProblemFile,
    pub sectors: Vec<SectorJson>,
    pub nondegenerate: bool,
    pub cohomology_theorem: DimsJson,
    pub cohomology_brute_force: Option<DimsJson>,
    pub first_order: FirstOrderJson,
    pub obstruction: Option<ClassJson>,
    pub feasibility_residual: Option<f64>,
    pub anomaly: bool,
    pub anomaly_order: Option<usize>,
    pub series: Option<SeriesJson>,
    pub gauge_check: Option<GaugeCheckJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationJson {
    pub relation: String,
    pub exact_degrees: Vec<usize>,
    /// `[degree, largest defect entry]`, the entry as an exact fraction.
    pub violations: Vec<(usize, String)>,
    pub exact_below_truncation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleJson {
    pub exact_columns: Vec<usize>,
    pub violating_columns: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VermaReport {
    pub lambda: String,
    pub degree: usize,
    pub relations: Vec<RelationJson>,
    pub cocycle: CocycleJson,
    pub negative_control: CocycleJson,
}
