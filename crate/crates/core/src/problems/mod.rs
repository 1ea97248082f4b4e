//! Concrete [`MinimaxProblem`](crate::problem::MinimaxProblem) implementations.

mod dro;
mod features;
mod synthetic;

pub use dro::{DroParams, DroProblem};
pub use features::FeatureMatrix;
pub use synthetic::{NoiseModel, SyntheticProblem, DEFAULT_SAMPLES};
