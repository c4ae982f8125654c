//! JSON input documents.
//!
//! ```json
//! { "name": "Nil3", "c": {"XY": [0, 0, 1]}, "metric": [[1,0,0],[0,1,0],[0,0,1]] }
//! ```
//!
//! `c` is either a dense `3×3×3` array with `c[i][j][k]` the `e_k` coefficient
//! of `[e_i, e_j]`, or a sparse map from letter pairs to bracket vectors.
//! When `c` is absent, `name` (with `params.alpha` for the families) selects a
//! catalog entry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{catalog, CatalogEntry, Mat3, MetricSpec, StructureConstants, BASIS_LETTERS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Brackets {
    Dense([[[f64; 3]; 3]; 3]),
    Sparse(BTreeMap<String, [f64; 3]>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(alias = "α", default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Brackets>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
}

/// A parsed and validated input algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedAlgebra {
    pub label: String,
    pub constants: StructureConstants,
    pub metric: MetricSpec,
}

impl LoadedAlgebra {
    pub fn from_entry(entry: &CatalogEntry) -> Self {
        Self {
            label: entry.label(),
            constants: entry.constants,
            metric: entry.metric,
        }
    }

    /// Structure constants in a metric-orthonormal basis.
    pub fn orthonormal(&self) -> StructureConstants {
        self.constants.orthonormalize(&self.metric)
    }
}

impl AlgebraDocument {
    /// Dense document for a catalog entry.
    pub fn from_entry(entry: &CatalogEntry) -> Self {
        let g = entry.metric.matrix();
        Self {
            name: Some(entry.group.name().to_string()),
            c: Some(Brackets::Dense(entry.constants.tensor())),
            metric: Some([
                [g[(0, 0)], g[(0, 1)], g[(0, 2)]],
                [g[(1, 0)], g[(1, 1)], g[(1, 2)]],
                [g[(2, 0)], g[(2, 1)], g[(2, 2)]],
            ]),
            params: entry.alpha.map(|a| Params { alpha: Some(a) }),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("malformed document: {e}")))
    }

    /// Resolves brackets and metric, enforcing antisymmetry and the Jacobi bound.
    pub fn load(&self, tol: f64) -> Result<LoadedAlgebra> {
        let alpha = self.params.as_ref().and_then(|p| p.alpha);
        let (label, constants) = match (&self.c, &self.name) {
            (Some(brackets), name) => {
                let label = match (name, alpha) {
                    (Some(n), Some(a)) => format!("{n}({a})"),
                    (Some(n), None) => n.clone(),
                    (None, _) => "input".to_string(),
                };
                (label, brackets_to_constants(brackets, tol)?)
            }
            (None, Some(name)) => {
                let entry = catalog(name, alpha)?;
                (entry.label(), entry.constants)
            }
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "document needs either \"c\" or a catalog \"name\"".into(),
                ))
            }
        };
        constants.check_jacobi(tol)?;
        let metric = match &self.metric {
            Some(m) => parse_metric(m)?,
            None => MetricSpec::identity(),
        };
        Ok(LoadedAlgebra {
            label,
            constants,
            metric,
        })
    }
}

pub fn parse_metric(rows: &[[f64; 3]; 3]) -> Result<MetricSpec> {
    MetricSpec::new(Mat3::from_fn(|i, j| rows[i][j]))
}

/// Parses a bare `3×3` JSON array as a metric.
pub fn parse_metric_text(text: &str) -> Result<MetricSpec> {
    let rows: [[f64; 3]; 3] = serde_json::from_str(text)
        .map_err(|e| Error::InvalidMetric(format!("expected a 3x3 array: {e}")))?;
    parse_metric(&rows)
}

fn letter_index(ch: char) -> Option<usize> {
    BASIS_LETTERS
        .iter()
        .position(|&l| l == ch.to_ascii_uppercase())
}

fn brackets_to_constants(brackets: &Brackets, tol: f64) -> Result<StructureConstants> {
    match brackets {
        Brackets::Dense(t) => {
            let scale = t
                .iter()
                .flatten()
                .flatten()
                .fold(1.0_f64, |m, v| m.max(v.abs()));
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let defect = (t[i][j][k] + t[j][i][k]).abs();
                        if !t[i][j][k].is_finite() || defect > tol * scale {
                            return Err(Error::InvalidParameter(format!(
                                "c[{i}][{j}][{k}] breaks antisymmetry (defect {defect:.3e})"
                            )));
                        }
                    }
                }
            }
            Ok(StructureConstants::from_tensor(*t))
        }
        Brackets::Sparse(map) => {
            let mut given: [[Option<[f64; 3]>; 3]; 3] = [[None; 3]; 3];
            for (key, value) in map {
                let letters: Vec<char> = key.chars().collect();
                let (i, j) = match letters.as_slice() {
                    [a, b] => match (letter_index(*a), letter_index(*b)) {
                        (Some(i), Some(j)) if i != j => (i, j),
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "bad bracket key \"{key}\""
                            )))
                        }
                    },
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "bad bracket key \"{key}\""
                        )))
                    }
                };
                if value.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "non-finite entry for \"{key}\""
                    )));
                }
                given[i][j] = Some(*value);
            }
            let mut list = Vec::new();
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let v = match (given[i][j], given[j][i]) {
                        (Some(v), Some(w)) => {
                            let scale = v
                                .iter()
                                .chain(w.iter())
                                .fold(1.0_f64, |m, x| m.max(x.abs()));
                            if (0..3).any(|k| (v[k] + w[k]).abs() > tol * scale) {
                                return Err(Error::InvalidParameter(format!(
                                    "inconsistent \"{}{}\" and \"{}{}\"",
                                    BASIS_LETTERS[i],
                                    BASIS_LETTERS[j],
                                    BASIS_LETTERS[j],
                                    BASIS_LETTERS[i]
                                )));
                            }
                            v
                        }
                        (Some(v), None) => v,
                        (None, Some(w)) => [-w[0], -w[1], -w[2]],
                        (None, None) => continue,
                    };
                    list.push((i, j, v));
                }
            }
            Ok(StructureConstants::from_brackets(&list))
        }
    }
}
