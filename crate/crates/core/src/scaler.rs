//! Min-max scaling into the unit box and back.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{check_dims, FeatureVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingModel {
    mins: Vec<f64>,
    ranges: Vec<f64>,
}

impl ScalingModel {
    /// Fits per-column minima and ranges. Constant columns get range 1.
    pub fn fit(rows: &[FeatureVector]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?;
        let d = first.len();
        let mut mins = first.as_slice().to_vec();
        let mut maxs = mins.clone();
        for row in &rows[1..] {
            check_dims(d, row.len())?;
            for (i, v) in row.iter().enumerate() {
                mins[i] = mins[i].min(*v);
                maxs[i] = maxs[i].max(*v);
            }
        }
        let ranges = mins
            .iter()
            .zip(&maxs)
            .map(|(lo, hi)| {
                let r = hi - lo;
                if r > 0.0 && r.is_finite() {
                    r
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { mins, ranges })
    }

    /// The model that leaves values untouched, for pre-scaled data.
    pub fn identity(d: usize) -> Self {
        Self {
            mins: vec![0.0; d],
            ranges: vec![1.0; d],
        }
    }

    pub fn dimension(&self) -> usize {
        self.mins.len()
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    /// Maps original units to scaled units. No clipping.
    pub fn apply(&self, v: &FeatureVector) -> Result<FeatureVector> {
        check_dims(self.dimension(), v.len())?;
        let out = v
            .iter()
            .zip(self.mins.iter().zip(&self.ranges))
            .map(|(x, (lo, r))| (x - lo) / r)
            .collect();
        FeatureVector::new(out)
    }

    /// Maps scaled units back to original units.
    pub fn invert(&self, v: &FeatureVector) -> Result<FeatureVector> {
        check_dims(self.dimension(), v.len())?;
        let out = v
            .iter()
            .zip(self.mins.iter().zip(&self.ranges))
            .map(|(x, (lo, r))| x * r + lo)
            .collect();
        FeatureVector::new(out)
    }

    /// Converts a difference vector to original units. Differences are
    /// shift-invariant, so only the ranges apply.
    pub fn invert_move(&self, mv: &FeatureVector) -> Result<FeatureVector> {
        check_dims(self.dimension(), mv.len())?;
        let out = mv.iter().zip(&self.ranges).map(|(m, r)| m * r).collect();
        FeatureVector::new(out)
    }
}
