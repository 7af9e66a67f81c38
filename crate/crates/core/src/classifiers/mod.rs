//! The black-box contract and its implementations.
//!
//! The engine only ever sees a [`Classifier`]: a dimension, a label set, and
//! a batch prediction function. Built-in classifiers have closed-form
//! decision boundaries and serve as test oracles; [`ExternalClassifier`]
//! drives a child process over the `GS1` line protocol.

mod builtin;
mod external;

pub use builtin::{BuiltinClassifier, BuiltinSpec};
pub use external::{ExternalClassifier, MAX_BATCH, DEFAULT_TIMEOUT};

use crate::error::ClassifierError;
use crate::types::{FeatureVector, Label};

pub trait Classifier: Send + Sync {
    fn dimension(&self) -> usize;

    fn labels(&self) -> &[Label];

    /// Whether `predict` may be called from several threads at once.
    fn concurrent_safe(&self) -> bool;

    /// One label per input, in input order.
    fn predict(&self, batch: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError>;

    fn predict_one(&self, v: &FeatureVector) -> Result<Label, ClassifierError> {
        let labels = self.predict(std::slice::from_ref(v))?;
        labels
            .into_iter()
            .next()
            .ok_or_else(|| ClassifierError::ProtocolViolation("empty prediction".into()))
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn labels(&self) -> &[Label] {
        (**self).labels()
    }

    fn concurrent_safe(&self) -> bool {
        (**self).concurrent_safe()
    }

    fn predict(&self, batch: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError> {
        (**self).predict(batch)
    }
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn labels(&self) -> &[Label] {
        (**self).labels()
    }

    fn concurrent_safe(&self) -> bool {
        (**self).concurrent_safe()
    }

    fn predict(&self, batch: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError> {
        (**self).predict(batch)
    }
}

/// Wraps a closure as a classifier. Handy for tests and for embedding
/// models that already live in-process.
pub struct FnClassifier<F> {
    dimension: usize,
    labels: Vec<Label>,
    f: F,
}

impl<F> FnClassifier<F>
where
    F: Fn(&FeatureVector) -> Label + Send + Sync,
{
    pub fn new(dimension: usize, labels: Vec<Label>, f: F) -> Self {
        Self { dimension, labels, f }
    }
}

impl<F> Classifier for FnClassifier<F>
where
    F: Fn(&FeatureVector) -> Label + Send + Sync,
{
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
                Ok((self.f)(v))
            })
            .collect()
    }
}
