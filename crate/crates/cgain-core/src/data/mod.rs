//! Masked tabular datasets and the operations that prepare them for
//! training: synthetic generation, MCAR mask simulation, min-max scaling,
//! splitting, and missing-rate reporting.

mod dataset;
mod mcar;
mod scale;
mod split;
mod synthetic;

pub use dataset::{FeatureKind, MaskedDataset, MissingReport};
pub use mcar::apply_mcar;
pub use scale::{fit_scaler, scale, unscale, unscale_matrix, ScalerState};
pub use split::{split, SplitIndices, SplitPlan};
pub use synthetic::{generate_synthetic, SyntheticSpec};
