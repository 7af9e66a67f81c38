use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::error::{ClassifierError, Error, Result};
use crate::types::{l2_distance, FeatureVector, Label};

const BINARY: [Label; 2] = [Label(-1), Label(1)];

/// Synthetic decision functions with known boundaries. Points on a boundary
/// are labeled `+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinSpec {
    /// `sign(w·v + b)`.
    Hyperplane { w: Vec<f64>, b: f64 },
    /// `sign(v[index] - threshold)`.
    AxisThreshold { index: usize, threshold: f64 },
    /// `+1` inside the closed ball, `-1` outside.
    HypersphereBoundary { center: Vec<f64>, radius: f64 },
    /// `+1` iff `min(v[i] for i in indices) >= threshold`.
    MinThreshold { indices: Vec<usize>, threshold: f64 },
    Constant(Label),
}

impl BuiltinSpec {
    /// Euclidean distance from `x` to the decision boundary, where one
    /// exists in closed form.
    pub fn boundary_distance(&self, x: &[f64]) -> Option<f64> {
        match self {
            BuiltinSpec::Hyperplane { w, b } => {
                let dot: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
                let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
                Some((dot + b).abs() / norm)
            }
            BuiltinSpec::AxisThreshold { index, threshold } => Some((x[*index] - threshold).abs()),
            BuiltinSpec::HypersphereBoundary { center, radius } => {
                Some((l2_distance(x, center) - radius).abs())
            }
            BuiltinSpec::MinThreshold { .. } | BuiltinSpec::Constant(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuiltinClassifier {
    spec: BuiltinSpec,
    dimension: usize,
    labels: Vec<Label>,
}

impl BuiltinClassifier {
    pub fn new(spec: BuiltinSpec, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension);
        }
        let invalid = |msg: &str| Err(Error::InvalidClassifier(msg.to_string()));
        let labels = match &spec {
            BuiltinSpec::Hyperplane { w, b } => {
                if w.len() != dimension {
                    return Err(Error::DimensionMismatch { expected: dimension, actual: w.len() });
                }
                if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
                    return invalid("hyperplane coefficients must be finite");
                }
                if w.iter().all(|v| *v == 0.0) {
                    return invalid("hyperplane normal must be nonzero");
                }
                BINARY.to_vec()
            }
            BuiltinSpec::AxisThreshold { index, threshold } => {
                if *index >= dimension {
                    return invalid("axis index out of range");
                }
                if !threshold.is_finite() {
                    return invalid("threshold must be finite");
                }
                BINARY.to_vec()
            }
            BuiltinSpec::HypersphereBoundary { center, radius } => {
                if center.len() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        actual: center.len(),
                    });
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return invalid("sphere radius must be positive");
                }
                BINARY.to_vec()
            }
            BuiltinSpec::MinThreshold { indices, threshold } => {
                if indices.is_empty() || indices.iter().any(|i| *i >= dimension) {
                    return invalid("min-threshold indices must be nonempty and in range");
                }
                if !threshold.is_finite() {
                    return invalid("threshold must be finite");
                }
                BINARY.to_vec()
            }
            BuiltinSpec::Constant(l) => vec![*l],
        };
        Ok(Self { spec, dimension, labels })
    }

    pub fn spec(&self) -> &BuiltinSpec {
        &self.spec
    }

    fn label(&self, v: &[f64]) -> Label {
        let plus = match &self.spec {
            BuiltinSpec::Hyperplane { w, b } => {
                w.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() + b >= 0.0
            }
            BuiltinSpec::AxisThreshold { index, threshold } => v[*index] - threshold >= 0.0,
            BuiltinSpec::HypersphereBoundary { center, radius } => l2_distance(v, center) <= *radius,
            BuiltinSpec::MinThreshold { indices, threshold } => {
                indices.iter().map(|i| v[*i]).fold(f64::INFINITY, f64::min) >= *threshold
            }
            BuiltinSpec::Constant(l) => return *l,
        };
        if plus {
            Label(1)
        } else {
            Label(-1)
        }
    }
}

impl Classifier for BuiltinClassifier {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn concurrent_safe(&self) -> bool {
        true
    }

    fn predict(&self, batch: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError> {
        batch
            .iter()
            .map(|v| {
                if v.len() != self.dimension {
                    return Err(ClassifierError::DimensionMismatch {
                        expected: self.dimension,
                        actual: v.len(),
                    });
                }
                Ok(self.label(v.as_slice()))
            })
            .collect()
    }
}
