use std::time::Duration;

use thiserror::Error;

use crate::types::Label;

/// Failures raised while talking to a classifier.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("classifier process is gone: {0}")]
    ProcessDead(String),

    #[error("classifier did not answer within {0:?}")]
    Timeout(Duration),

    #[error("classifier expects dimension {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("failed to start classifier: {0}")]
    Spawn(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value at coordinate {index}")]
    NonFinite { index: usize },

    #[error("dimension must be at least 1")]
    InvalidDimension,

    #[error("invalid spherical layer: a0={a0}, a1={a1}")]
    InvalidLayer { a0: f64, a1: f64 },

    #[error("target label {0} equals the reference label")]
    InvalidTarget(Label),

    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("invalid classifier specification: {0}")]
    InvalidClassifier(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("input is empty")]
    EmptyInput,

    #[error("no enemy found before the outer radius exceeded {radius_cap}")]
    NoEnemyFound { radius_cap: f64 },

    #[error("starting point is not an enemy of the reference label")]
    NotAnEnemy,

    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
