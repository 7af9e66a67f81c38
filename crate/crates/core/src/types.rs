//! Value types shared by the search, sparsification and reporting stages.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the (scaled) input space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    /// Wraps values the caller already knows to be finite.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Number of strictly nonzero entries.
    pub fn l0(&self) -> usize {
        self.0.iter().filter(|v| **v != 0.0).count()
    }

    pub fn l2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `self - other`, coordinate by coordinate.
    pub fn sub(&self, other: &FeatureVector) -> Result<FeatureVector> {
        check_dims(self.len(), other.len())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub(crate) fn set(&mut self, i: usize, v: f64) {
        self.0[i] = v;
    }
}

impl Index<usize> for FeatureVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Euclidean distance. Every distance in the crate goes through here so that
/// containment and closest-enemy checks agree bit for bit.
pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

/// Class identifier. Binary problems use `-1` and `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub i64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which labels count as enemies of the explained observation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    AnyDifferent,
    Specific(Label),
}

impl Target {
    /// Fails when a specific target names the reference class itself.
    pub fn validate(&self, reference: Label) -> Result<()> {
        match *self {
            Target::Specific(t) if t == reference => Err(Error::InvalidTarget(t)),
            _ => Ok(()),
        }
    }
}

/// Is `label` an enemy of `reference` under the `target` policy?
pub fn is_enemy(label: Label, reference: Label, target: Target) -> Result<bool> {
    target.validate(reference)?;
    Ok(enemy_unchecked(label, reference, target))
}

#[inline]
pub(crate) fn enemy_unchecked(label: Label, reference: Label, target: Target) -> bool {
    match target {
        Target::AnyDifferent => label != reference,
        Target::Specific(t) => label == t,
    }
}

/// How radii are drawn when filling a spherical layer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Radius uniform on `[a0, a1]`.
    #[default]
    PaperRadiusUniform,
    /// Radius distributed so points are uniform over the layer volume.
    VolumeUniform,
}

pub const DEFAULT_ETA: f64 = 0.001;
pub const DEFAULT_N_SAMPLES: usize = 10_000;
pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_ETA_FLOOR: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Initial ball radius, also the width of every outer layer.
    pub eta: f64,
    /// Points generated per layer.
    pub n_samples: usize,
    /// Weight of the sparsity term in the reported cost.
    pub gamma: f64,
    /// Largest outer radius tried before giving up. `None` means `2·√d`.
    pub radius_cap: Option<f64>,
    /// Smallest initial radius reached by halving.
    pub eta_floor: f64,
    pub sampling_mode: SamplingMode,
    pub seed: u64,
    pub target: Target,
    pub clamp_to_unit_box: bool,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            n_samples: DEFAULT_N_SAMPLES,
            gamma: DEFAULT_GAMMA,
            radius_cap: None,
            eta_floor: DEFAULT_ETA_FLOOR,
            sampling_mode: SamplingMode::PaperRadiusUniform,
            seed: DEFAULT_SEED,
            target: Target::AnyDifferent,
            clamp_to_unit_box: false,
        }
    }
}

impl Hyperparameters {
    /// Radius cap for a `d`-dimensional problem, after defaulting.
    pub fn radius_cap_for(&self, d: usize) -> f64 {
        self.radius_cap.unwrap_or(2.0 * (d as f64).sqrt())
    }

    /// Checks every numeric constraint for a `d`-dimensional problem.
    pub fn validate(&self, d: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHyperparameters(msg));
        if d == 0 {
            return Err(Error::InvalidDimension);
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if self.n_samples == 0 {
            return bad("n_samples must be at least 1".into());
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad(format!("gamma must be nonnegative, got {}", self.gamma));
        }
        if !(self.eta_floor.is_finite() && self.eta_floor > 0.0) {
            return bad(format!("eta_floor must be positive, got {}", self.eta_floor));
        }
        let cap = self.radius_cap_for(d);
        if !(cap.is_finite() && cap > self.eta) {
            return bad(format!("radius_cap ({cap}) must exceed eta ({})", self.eta));
        }
        Ok(())
    }
}

/// Cost of moving from `x` to `e`: Euclidean length plus weighted sparsity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub l2: f64,
    pub l0: usize,
    pub total: f64,
}

pub fn cost(x: &FeatureVector, e: &FeatureVector, gamma: f64) -> Result<CostBreakdown> {
    check_dims(x.len(), e.len())?;
    for v in [x, e] {
        if let Some(index) = v.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
    }
    let l2 = l2_distance(e.as_slice(), x.as_slice());
    let l0 = x.iter().zip(e.iter()).filter(|(a, b)| a != b).count();
    Ok(CostBreakdown {
        l2,
        l0,
        total: l2 + gamma * l0 as f64,
    })
}

/// Black-box call accounting for one explanation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    /// Number of points submitted to the classifier.
    pub classifier_calls: u64,
    pub halvings: u32,
    pub layers_explored: u32,
    /// `(a0, a1)` of the last layer generated.
    pub final_layer: (f64, f64),
    pub seed_used: u64,
    pub stream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub x: FeatureVector,
    pub enemy_raw: FeatureVector,
    pub enemy_final: FeatureVector,
    /// `enemy_final - x` in scaled units.
    pub r#move: FeatureVector,
    pub move_original_units: FeatureVector,
    pub label_x: Label,
    pub label_enemy: Label,
    pub cost_raw: CostBreakdown,
    pub cost_final: CostBreakdown,
    pub diagnostics: SearchDiagnostics,
}

impl Explanation {
    pub fn sparsity(&self) -> usize {
        self.cost_final.l0
    }
}
