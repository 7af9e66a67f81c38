//! JSON and CSV documents emitted by the CLI. Field names are stable within
//! a schema version.

use std::io::Write;

use anyhow::Result;
use growing_spheres::{
    sparsity_cdf_from_counts, CdfPoint, Error, Explanation, FeatureVector, Hyperparameters,
};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct MoveEntry<'a> {
    pub feature: &'a str,
    pub index: usize,
    /// In original units.
    pub r#move: f64,
    pub move_scaled: f64,
}

#[derive(Serialize)]
pub struct ExplainReport<'a> {
    pub schema: u32,
    pub index: usize,
    pub seed: u64,
    /// Nonzero moves, largest first.
    pub moves: Vec<MoveEntry<'a>>,
    pub features: &'a [String],
    pub x_original: &'a FeatureVector,
    #[serde(flatten)]
    pub explanation: &'a Explanation,
    pub hyperparameters: &'a Hyperparameters,
}

impl<'a> ExplainReport<'a> {
    pub fn new(
        index: usize,
        features: &'a [String],
        x_original: &'a FeatureVector,
        explanation: &'a Explanation,
        hp: &'a Hyperparameters,
    ) -> Self {
        let mut moves: Vec<MoveEntry<'a>> = explanation
            .r#move
            .iter()
            .enumerate()
            .filter(|(_, m)| **m != 0.0)
            .map(|(i, m)| MoveEntry {
                feature: &features[i],
                index: i,
                r#move: explanation.move_original_units[i],
                move_scaled: *m,
            })
            .collect();
        moves.sort_by(|a, b| {
            b.r#move
                .abs()
                .total_cmp(&a.r#move.abs())
                .then(a.index.cmp(&b.index))
        });
        Self {
            schema: SCHEMA,
            index,
            seed: hp.seed,
            moves,
            features,
            x_original,
            explanation,
            hyperparameters: hp,
        }
    }
}

pub fn status(result: &Result<Explanation, Error>) -> &'static str {
    match result {
        Ok(_) => "OK",
        Err(Error::NoEnemyFound { .. }) => "NO_ENEMY",
        Err(Error::Classifier(_)) => "CLASSIFIER_ERROR",
        Err(Error::InvalidTarget(_)) => "INVALID_TARGET",
        Err(_) => "ERROR",
    }
}

pub fn write_batch_csv(
    out: &mut dyn Write,
    results: &[(usize, Result<Explanation, Error>)],
) -> Result<()> {
    writeln!(out, "index,status,l2,l0,total,classifier_calls")?;
    for (i, r) in results {
        match r {
            Ok(e) => writeln!(
                out,
                "{i},{},{},{},{},{}",
                status(r),
                e.cost_final.l2,
                e.cost_final.l0,
                e.cost_final.total,
                e.diagnostics.classifier_calls
            )?,
            Err(_) => writeln!(out, "{i},{},,,,", status(r))?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
pub struct BatchSummary {
    pub schema: u32,
    pub seed: u64,
    pub rows: usize,
    pub successes: usize,
    pub failures: usize,
    pub max_sparsity: Option<usize>,
    pub cdf: Vec<CdfPoint>,
}

impl BatchSummary {
    pub fn new(results: &[(usize, Result<Explanation, Error>)], seed: u64) -> Self {
        let sparsities: Vec<usize> = results
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok())
            .map(|e| e.cost_final.l0)
            .collect();
        Self {
            schema: SCHEMA,
            seed,
            rows: results.len(),
            successes: sparsities.len(),
            failures: results.len() - sparsities.len(),
            max_sparsity: sparsities.iter().copied().max(),
            cdf: sparsity_cdf_from_counts(&sparsities).unwrap_or_default(),
        }
    }
}
