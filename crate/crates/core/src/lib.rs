//! Counterfactual explanations for black-box classifiers.
//!
//! Given only a decision function `f` and an observation `x`, the engine
//! looks for the closest point `e` that `f` classifies differently (an
//! *enemy*), then makes the move `e - x` sparse by reverting the least
//! significant coordinates. The result is reported as an [`Explanation`]
//! with its cost `||e - x||_2 + gamma * ||e - x||_0`.
//!
//! ```
//! use growing_spheres::{explain, BuiltinClassifier, BuiltinSpec, FeatureVector,
//!                       Hyperparameters, ScalingModel};
//!
//! let f = BuiltinClassifier::new(BuiltinSpec::AxisThreshold { index: 0, threshold: 0.5 }, 3)?;
//! let x = FeatureVector::new(vec![0.9, 0.5, 0.5])?;
//! let hp = Hyperparameters { eta: 0.01, n_samples: 2000, ..Default::default() };
//! let e = explain(&f, &x, &ScalingModel::identity(3), &hp)?;
//! assert_eq!(e.cost_final.l0, 1);
//! # Ok::<(), growing_spheres::Error>(())
//! ```

pub mod classifiers;
pub mod error;
pub mod explainer;
pub mod sampler;
pub mod scaler;
pub mod search;
pub mod sparsify;
pub mod types;

pub use classifiers::{BuiltinClassifier, BuiltinSpec, Classifier, ExternalClassifier, FnClassifier};
pub use error::{ClassifierError, Error, Result};
pub use explainer::{
    explain, explain_batch, explain_with_stream, sparsity_cdf, sparsity_cdf_from_counts, CdfPoint,
};
pub use sampler::{sample_layer, sample_unit_sphere, LayerSpec, RandomSource};
pub use scaler::ScalingModel;
pub use search::{generate_enemy, generate_enemy_observed, BatchRecord, GenerationResult, Phase};
pub use sparsify::{revert_smallest, sparsify, SparsifyResult};
pub use types::{
    cost, is_enemy, l2_distance, CostBreakdown, Explanation, FeatureVector, Hyperparameters, Label,
    SamplingMode, SearchDiagnostics, Target,
};
