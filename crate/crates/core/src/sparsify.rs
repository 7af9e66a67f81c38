//! Greedy sparsification of an enemy.
//!
//! Coordinates of `e` are reverted to their value in `x`, smallest absolute
//! difference first, for as long as the result stays an enemy. The last
//! point that was still an enemy is returned.

use crate::classifiers::Classifier;
use crate::error::{Error, Result};
use crate::types::{check_dims, enemy_unchecked, FeatureVector, Label, Target};

#[derive(Clone, Debug, PartialEq)]
pub struct SparsifyResult {
    pub enemy: FeatureVector,
    pub label: Label,
    /// Coordinates reverted while probing, including the final rejected one.
    pub reductions: u32,
    /// Points classified, including the initial check of `e`.
    pub classifier_calls: u64,
}

/// Index of the smallest nonzero `|e[j] - x[j]|`, lowest index on ties.
pub fn smallest_difference(x: &FeatureVector, e: &FeatureVector) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, (a, b)) in x.iter().zip(e.iter()).enumerate() {
        if a == b {
            continue;
        }
        let gap = (b - a).abs();
        if best.is_none_or(|(_, g)| gap < g) {
            best = Some((j, gap));
        }
    }
    best.map(|(j, _)| j)
}

/// Returns `e` with its smallest differing coordinate reverted to `x`, or
/// `None` when `e == x`.
pub fn revert_smallest(x: &FeatureVector, e: &FeatureVector) -> Option<FeatureVector> {
    smallest_difference(x, e).map(|i| {
        let mut out = e.clone();
        out.set(i, x[i]);
        out
    })
}

pub fn sparsify<C: Classifier + ?Sized>(
    f: &C,
    x: &FeatureVector,
    e: &FeatureVector,
    reference: Label,
    target: Target,
) -> Result<SparsifyResult> {
    check_dims(x.len(), e.len())?;
    check_dims(f.dimension(), x.len())?;
    target.validate(reference)?;

    let mut label = f.predict_one(e)?;
    let mut calls = 1u64;
    if !enemy_unchecked(label, reference, target) {
        return Err(Error::NotAnEnemy);
    }

    let mut current = e.clone();
    let mut reductions = 0u32;
    while let Some(next) = revert_smallest(x, &current) {
        reductions += 1;
        // x itself is never an enemy of its own label.
        if next == *x {
            break;
        }
        let next_label = f.predict_one(&next)?;
        calls += 1;
        if !enemy_unchecked(next_label, reference, target) {
            break;
        }
        current = next;
        label = next_label;
    }

    Ok(SparsifyResult {
        enemy: current,
        label,
        reductions,
        classifier_calls: calls,
    })
}
