//! Enemy generation by growing spherical layers.
//!
//! Starting from a ball of radius `eta` around `x`, the ball is halved while
//! it still contains enemies, so the closest boundary is not skipped. Once a
//! ball is clean, layers `[a0, a0 + eta]` are generated outward until one of
//! them contains an enemy. The closest enemy generated during the whole call
//! is returned.

use log::debug;

use crate::classifiers::Classifier;
use crate::error::{Error, Result};
use crate::sampler::{sample_layer, LayerSpec, RandomSource};
use crate::types::{
    check_dims, enemy_unchecked, l2_distance, FeatureVector, Hyperparameters, Label,
    SearchDiagnostics,
};

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationResult {
    pub enemy: FeatureVector,
    pub enemy_label: Label,
    /// Label of the explained observation.
    pub reference: Label,
    pub distance: f64,
    pub diagnostics: SearchDiagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// A ball `SL(x, 0, eta)`, initial or after halving.
    Ball,
    /// An outer layer `SL(x, a0, a1)`.
    Layer,
}

/// One classified batch, as seen by a search observer.
#[derive(Debug)]
pub struct BatchRecord<'a> {
    pub phase: Phase,
    pub a0: f64,
    pub a1: f64,
    pub points: &'a [FeatureVector],
    pub labels: &'a [Label],
}

/// Runs the search for the closest enemy of `x`.
pub fn generate_enemy<C: Classifier + ?Sized>(
    f: &C,
    x: &FeatureVector,
    hp: &Hyperparameters,
    rng: &mut RandomSource,
) -> Result<GenerationResult> {
    generate_enemy_observed(f, x, hp, rng, &mut |_| {})
}

/// Like [`generate_enemy`], handing every classified batch to `observer`.
pub fn generate_enemy_observed<C: Classifier + ?Sized>(
    f: &C,
    x: &FeatureVector,
    hp: &Hyperparameters,
    rng: &mut RandomSource,
    observer: &mut dyn FnMut(&BatchRecord<'_>),
) -> Result<GenerationResult> {
    check_dims(f.dimension(), x.len())?;
    hp.validate(x.len())?;
    let reference = f.predict_one(x)?;
    hp.target.validate(reference)?;
    let diagnostics = SearchDiagnostics {
        seed_used: rng.seed(),
        stream: rng.stream(),
        ..Default::default()
    };
    Search {
        f,
        x,
        hp,
        rng,
        reference,
        best: None,
        diagnostics,
        observer,
    }
    .run()
}

struct Best {
    point: FeatureVector,
    label: Label,
    distance: f64,
}

struct Search<'a, C: ?Sized> {
    f: &'a C,
    x: &'a FeatureVector,
    hp: &'a Hyperparameters,
    rng: &'a mut RandomSource,
    reference: Label,
    best: Option<Best>,
    diagnostics: SearchDiagnostics,
    observer: &'a mut dyn FnMut(&BatchRecord<'_>),
}

impl<C: Classifier + ?Sized> Search<'_, C> {
    /// Generates and classifies one batch. Returns whether it held an enemy.
    fn batch(&mut self, phase: Phase, a0: f64, a1: f64) -> Result<bool> {
        let layer = LayerSpec::new(self.x.clone(), a0, a1)?;
        let mut points = sample_layer(&layer, self.hp.n_samples, self.hp.sampling_mode, self.rng);
        if self.hp.clamp_to_unit_box {
            for p in &mut points {
                for i in 0..p.len() {
                    let v = p[i].clamp(0.0, 1.0);
                    p.set(i, v);
                }
            }
        }
        let labels = self.f.predict(&points)?;
        if labels.len() != points.len() {
            return Err(crate::error::ClassifierError::ProtocolViolation(format!(
                "expected {} labels, got {}",
                points.len(),
                labels.len()
            ))
            .into());
        }
        self.diagnostics.classifier_calls += points.len() as u64;
        self.diagnostics.final_layer = (a0, a1);
        (self.observer)(&BatchRecord {
            phase,
            a0,
            a1,
            points: &points,
            labels: &labels,
        });

        let mut found = false;
        for (p, l) in points.iter().zip(&labels) {
            if !enemy_unchecked(*l, self.reference, self.hp.target) {
                continue;
            }
            found = true;
            let distance = l2_distance(p.as_slice(), self.x.as_slice());
            if self.best.as_ref().is_none_or(|b| distance < b.distance) {
                self.best = Some(Best {
                    point: p.clone(),
                    label: *l,
                    distance,
                });
            }
        }
        Ok(found)
    }

    fn run(mut self) -> Result<GenerationResult> {
        let mut eta = self.hp.eta;
        let cap = self.hp.radius_cap_for(self.x.len());

        let mut dirty = self.batch(Phase::Ball, 0.0, eta)?;
        while dirty {
            eta /= 2.0;
            self.diagnostics.halvings += 1;
            if eta < self.hp.eta_floor {
                debug!("eta fell below the floor after {} halvings", self.diagnostics.halvings);
                return Ok(self.finish());
            }
            dirty = self.batch(Phase::Ball, 0.0, eta)?;
        }

        let (mut a0, mut a1) = (eta, 2.0 * eta);
        loop {
            if a1 > cap {
                return Err(Error::NoEnemyFound { radius_cap: cap });
            }
            self.diagnostics.layers_explored += 1;
            if self.batch(Phase::Layer, a0, a1)? {
                break;
            }
            a0 = a1;
            a1 += eta;
        }
        debug!(
            "enemy found in layer ({a0}, {a1}) after {} layers",
            self.diagnostics.layers_explored
        );
        Ok(self.finish())
    }

    fn finish(self) -> GenerationResult {
        let best = self.best.expect("an enemy was observed");
        GenerationResult {
            enemy: best.point,
            enemy_label: best.label,
            reference: self.reference,
            distance: best.distance,
            diagnostics: self.diagnostics,
        }
    }
}
