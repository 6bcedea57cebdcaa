//! The `ProblemFile` input schema and its conversion to core types.

use std::path::Path;

use anomaly_core::{ComplexMatrix, Tolerances, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Row-major complex matrix, each entry `[re, im]`.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermiticity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commute: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_order: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_max_dim: Option<usize>,
}

impl ToleranceOverrides {
    pub fn is_empty(&self) -> bool {
        *self == ToleranceOverrides::default()
    }

    pub fn resolve(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        let fields = [
            ("hermiticity", self.hermiticity),
            ("commute", self.commute),
            ("rank", self.rank),
            ("cluster", self.cluster),
            ("obstruction", self.obstruction),
            ("first_order", self.first_order),
        ];
        for (name, v) in fields {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return Err(CliError::Validation(format!(
                        "tolerance {name} must be finite and nonnegative, got {v}"
                    )));
                }
            }
        }
        if let Some(v) = self.hermiticity {
            t.hermiticity = v;
        }
        if let Some(v) = self.commute {
            t.commute = v;
        }
        if let Some(v) = self.rank {
            t.rank = v;
        }
        if let Some(v) = self.oracle_max_dim {
            t.oracle_max_dim = v;
        }
        t.cluster = self.cluster;
        t.obstruction = self.obstruction;
        t.first_order = self.first_order;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: String,
    pub dim: usize,
    #[serde(rename = "H")]
    pub h: MatrixJson,
    #[serde(rename = "S")]
    pub s: MatrixJson,
    #[serde(rename = "delta_H1", default, skip_serializing_if = "Option::is_none")]
    pub delta_h1: Option<MatrixJson>,
    #[serde(rename = "delta_S1", default, skip_serializing_if = "Option::is_none")]
    pub delta_s1: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "ToleranceOverrides::is_empty")]
    pub tolerances: ToleranceOverrides,
}

impl ProblemFile {
    /// Parses a problem file, or the `input` record embedded in a report.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed JSON: {e}")))?;
        let value = match value {
            serde_json::Value::Object(mut map) if !map.contains_key("schema_version") && map.contains_key("input") => {
                map.remove("input").unwrap_or_default()
            }
            v => v,
        };
        let file: ProblemFile =
            serde_json::from_value(value).map_err(|e| CliError::Validation(format!("invalid problem file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                self.schema_version
            )));
        }
        if self.dim == 0 {
            return Err(CliError::Validation("dim must be at least 1".into()));
        }
        let named = [
            ("H", Some(&self.h)),
            ("S", Some(&self.s)),
            ("delta_H1", self.delta_h1.as_ref()),
            ("delta_S1", self.delta_s1.as_ref()),
        ];
        for (name, m) in named {
            if let Some(m) = m {
                check_shape(name, m, self.dim)?;
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<ComplexMatrix, CliError> {
        to_matrix(&self.h)
    }

    pub fn symmetry(&self) -> Result<ComplexMatrix, CliError> {
        to_matrix(&self.s)
    }

    pub fn delta_h1(&self) -> Result<Option<ComplexMatrix>, CliError> {
        self.delta_h1.as_ref().map(to_matrix).transpose()
    }

    pub fn delta_s1(&self) -> Result<Option<ComplexMatrix>, CliError> {
        self.delta_s1.as_ref().map(to_matrix).transpose()
    }
}

fn check_shape(name: &str, m: &MatrixJson, dim: usize) -> Result<(), CliError> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(CliError::Validation(format!("{name} must be {dim}x{dim}")));
    }
    if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Validation(format!("{name} has non-finite entries")));
    }
    Ok(())
}

fn to_matrix(m: &MatrixJson) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

pub fn to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}
