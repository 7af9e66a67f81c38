//! End-to-end explanation: scale, search, sparsify, report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::Classifier;
use crate::error::{Error, Result};
use crate::sampler::RandomSource;
use crate::scaler::ScalingModel;
use crate::search::generate_enemy;
use crate::sparsify::sparsify;
use crate::types::{cost, Explanation, FeatureVector, Hyperparameters};

/// Explains one observation given in original units, using random stream 0.
pub fn explain<C: Classifier + ?Sized>(
    f: &C,
    x_original: &FeatureVector,
    scaling: &ScalingModel,
    hp: &Hyperparameters,
) -> Result<Explanation> {
    explain_with_stream(f, x_original, scaling, hp, 0)
}

/// Explains one observation drawing from stream `stream` of `hp.seed`.
/// Batch item `i` uses stream `i`.
pub fn explain_with_stream<C: Classifier + ?Sized>(
    f: &C,
    x_original: &FeatureVector,
    scaling: &ScalingModel,
    hp: &Hyperparameters,
    stream: u64,
) -> Result<Explanation> {
    let x = scaling.apply(x_original)?;
    let mut rng = RandomSource::new(hp.seed, stream);
    let generated = generate_enemy(f, &x, hp, &mut rng)?;
    let reference = generated.reference;
    let sparse = sparsify(f, &x, &generated.enemy, reference, hp.target)?;

    let mv = sparse.enemy.sub(&x)?;
    let move_original_units = scaling.invert_move(&mv)?;
    let mut diagnostics = generated.diagnostics;
    // One call for f(x), then the sparsification probes.
    diagnostics.classifier_calls += 1 + sparse.classifier_calls;

    Ok(Explanation {
        cost_raw: cost(&x, &generated.enemy, hp.gamma)?,
        cost_final: cost(&x, &sparse.enemy, hp.gamma)?,
        x,
        enemy_raw: generated.enemy,
        enemy_final: sparse.enemy,
        r#move: mv,
        move_original_units,
        label_x: reference,
        label_enemy: sparse.label,
        diagnostics,
    })
}

/// Explains every row of `dataset`. Item `i` always uses random stream `i`,
/// so results do not depend on `workers`. Parallelism is only used when the
/// classifier declares itself concurrent-safe.
pub fn explain_batch<C: Classifier + ?Sized>(
    f: &C,
    dataset: &[FeatureVector],
    scaling: &ScalingModel,
    hp: &Hyperparameters,
    workers: usize,
) -> Vec<(usize, Result<Explanation>)> {
    let run = |(i, x): (usize, &FeatureVector)| (i, explain_with_stream(f, x, scaling, hp, i as u64));
    if workers <= 1 || !f.concurrent_safe() || dataset.len() < 2 {
        return dataset.iter().enumerate().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| dataset.par_iter().enumerate().map(run).collect()),
        Err(e) => {
            log::warn!("could not start {workers} workers ({e}), running sequentially");
            dataset.iter().enumerate().map(run).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub k: usize,
    pub fraction: f64,
}

/// Empirical CDF of explanation sparsity.
pub fn sparsity_cdf(explanations: &[Explanation]) -> Result<Vec<CdfPoint>> {
    let counts: Vec<usize> = explanations.iter().map(|e| e.r#move.l0()).collect();
    sparsity_cdf_from_counts(&counts)
}

/// Empirical CDF over raw sparsity values: one point per distinct value,
/// ascending, with the fraction of values at or below it.
pub fn sparsity_cdf_from_counts(sparsities: &[usize]) -> Result<Vec<CdfPoint>> {
    if sparsities.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = sparsities.to_vec();
    sorted.sort_unstable();
    let total = sorted.len() as f64;
    let mut out: Vec<CdfPoint> = Vec::new();
    for (i, k) in sorted.iter().enumerate() {
        let fraction = (i + 1) as f64 / total;
        match out.last_mut() {
            Some(last) if last.k == *k => last.fraction = fraction,
            _ => out.push(CdfPoint { k: *k, fraction }),
        }
    }
    Ok(out)
}
