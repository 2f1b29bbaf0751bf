//! Parametric two-class Gaussian generator used for desk-scale experiments.

use alloc::format;
use alloc::vec::Vec;
// Needed for float intrinsics under no_std; shadowed by inherent methods otherwise.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::dataset::{FeatureKind, MaskedDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{stream_rng, Stream};

/// Parameters of the synthetic dataset.
///
/// Samples are drawn from a single-factor Gaussian model: with class label
/// `y`, feature `j` is `mean_shift·y + √corr·f + √(1-corr)·ε_j` where `f` is
/// a per-sample shared factor and `ε_j` per-feature noise, both standard
/// normal. Every feature then has unit variance within each class, pairwise
/// correlation `correlation`, and a between-class mean gap of `mean_shift`
/// standard deviations. Labels are flipped with probability `label_noise`
/// after the features are drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub n_features: usize,
    pub class1_fraction: f64,
    pub mean_shift: f64,
    pub correlation: f64,
    pub label_noise: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(Error::Config("need at least 2 samples".into()));
        }
        if self.n_features == 0 {
            return Err(Error::Config("need at least 1 feature".into()));
        }
        if !(self.class1_fraction > 0.0 && self.class1_fraction < 1.0) {
            return Err(Error::Config(format!(
                "class1_fraction {} must lie in (0, 1)",
                self.class1_fraction
            )));
        }
        if !(0.0..1.0).contains(&self.correlation) {
            return Err(Error::Config(format!(
                "correlation {} must lie in [0, 1)",
                self.correlation
            )));
        }
        if !(0.0..=1.0).contains(&self.label_noise) {
            return Err(Error::Config("label_noise must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Draws a fully observed dataset; bit-deterministic per `(spec, seed)`.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<MaskedDataset> {
    spec.validate()?;
    let mut rng = stream_rng(seed, Stream::Synthetic);
    let (n, d) = (spec.n_samples, spec.n_features);
    let factor_w = spec.correlation.sqrt();
    let noise_w = (1.0 - spec.correlation).sqrt();

    let mut values = Matrix::zeros(n, d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y: u8 = if rng.gen::<f64>() < spec.class1_fraction { 1 } else { 0 };
        let factor: f64 = rng.sample(StandardNormal);
        for j in 0..d {
            let eps: f64 = rng.sample(StandardNormal);
            let v = spec.mean_shift * y as f64 + factor_w * factor + noise_w * eps;
            values.set(i, j, v);
        }
        let reported = if spec.label_noise > 0.0 && rng.gen::<f64>() < spec.label_noise {
            1 - y
        } else {
            y
        };
        labels.push(reported);
    }
    MaskedDataset::complete(values, labels, alloc::vec![FeatureKind::Numeric; d])
}
