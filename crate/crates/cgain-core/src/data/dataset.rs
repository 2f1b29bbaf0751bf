//! The core dataset representation: a value matrix, an explicit observation
//! mask, and binary labels.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Per-column type tag. Binary columns take values in {0, 1} and get
/// mode-imputation / cross-entropy reconstruction; numeric columns get
/// mean-imputation / squared-error reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Numeric,
    Binary,
}

/// A dataset of `n` samples over `d` features with explicit missingness.
///
/// `mask[i][j] = 1` means `values[i][j]` is observed; where the mask is 0 the
/// value cell holds an arbitrary placeholder (0 by convention) and must never
/// be read. The mask is the single source of truth for missingness.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedDataset {
    values: Matrix,
    mask: Matrix,
    labels: Vec<u8>,
    kinds: Vec<FeatureKind>,
    names: Vec<String>,
}

impl MaskedDataset {
    pub fn new(
        values: Matrix,
        mask: Matrix,
        labels: Vec<u8>,
        kinds: Vec<FeatureKind>,
        names: Vec<String>,
    ) -> Result<Self> {
        if mask.rows() != values.rows() || mask.cols() != values.cols() {
            return Err(Error::Shape(format!(
                "mask is {}x{} but values are {}x{}",
                mask.rows(),
                mask.cols(),
                values.rows(),
                values.cols()
            )));
        }
        if labels.len() != values.rows() {
            return Err(Error::Shape(format!(
                "{} labels for {} rows",
                labels.len(),
                values.rows()
            )));
        }
        if kinds.len() != values.cols() || names.len() != values.cols() {
            return Err(Error::Shape("feature kind/name count must match columns".into()));
        }
        if !values.is_finite() {
            return Err(Error::Data("values contain non-finite entries".into()));
        }
        if mask.as_slice().iter().any(|&m| m != 0.0 && m != 1.0) {
            return Err(Error::Data("mask entries must be 0 or 1".into()));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::Data("labels must be 0 or 1".into()));
        }
        for r in 0..mask.rows() {
            if mask.row(r).iter().all(|&m| m == 0.0) {
                return Err(Error::Data(format!("row {r} has no observed entries")));
            }
        }
        Ok(MaskedDataset {
            values,
            mask,
            labels,
            kinds,
            names,
        })
    }

    /// Fully observed dataset with default feature names `f0..f{d-1}`.
    pub fn complete(values: Matrix, labels: Vec<u8>, kinds: Vec<FeatureKind>) -> Result<Self> {
        let mask = Matrix::filled(values.rows(), values.cols(), 1.0);
        let names = (0..values.cols()).map(|j| format!("f{j}")).collect();
        Self::new(values, mask, labels, kinds, names)
    }

    #[inline]
    pub fn n_samples(&self) -> usize {
        self.values.rows()
    }

    #[inline]
    pub fn n_features(&self) -> usize {
        self.values.cols()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn mask(&self) -> &Matrix {
        &self.mask
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn kinds(&self) -> &[FeatureKind] {
        &self.kinds
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Replaces the labels (e.g. after label corruption in tests).
    pub fn with_labels(mut self, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != self.n_samples() {
            return Err(Error::Shape("label count mismatch".into()));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::Data("labels must be 0 or 1".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// New dataset holding the given rows, in order.
    pub fn subset_rows(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= self.n_samples() {
                return Err(Error::Usage(format!("row index {i} out of range")));
            }
        }
        Ok(MaskedDataset {
            values: self.values.take_rows(indices),
            mask: self.mask.take_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            kinds: self.kinds.clone(),
            names: self.names.clone(),
        })
    }

    /// Replaces the value matrix, keeping mask/labels/metadata. The new
    /// values must already respect the placeholder convention.
    pub fn with_values(&self, values: Matrix) -> Result<Self> {
        MaskedDataset::new(
            values,
            self.mask.clone(),
            self.labels.clone(),
            self.kinds.clone(),
            self.names.clone(),
        )
    }

    /// Per-feature and overall missing rates, per-feature list sorted from
    /// most to least missing.
    pub fn missing_report(&self) -> MissingReport {
        let n = self.n_samples() as f64;
        let mut per_feature: Vec<(String, f64)> = (0..self.n_features())
            .map(|j| {
                let observed: f64 = (0..self.n_samples()).map(|i| self.mask.get(i, j)).sum();
                (self.names[j].clone(), 1.0 - observed / n)
            })
            .collect();
        // Stable sort keeps column order among equal rates.
        per_feature.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let total: f64 = self.mask.as_slice().iter().sum();
        let overall = 1.0 - total / (self.mask.as_slice().len() as f64);
        MissingReport {
            per_feature,
            overall,
        }
    }
}

/// Output of [`MaskedDataset::missing_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct MissingReport {
    /// `(feature name, missing rate)`, sorted descending by rate.
    pub per_feature: Vec<(String, f64)>,
    pub overall: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn tiny() -> MaskedDataset {
        let values = Matrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 0.0, 5.0, 6.0]).unwrap();
        let mask = Matrix::from_vec(3, 2, vec![1.0, 1.0, 1.0, 0.0, 1.0, 1.0]).unwrap();
        MaskedDataset::new(
            values,
            mask,
            vec![0, 1, 0],
            vec![FeatureKind::Numeric; 2],
            vec!["a".to_string(), "b".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn rejects_fully_missing_rows() {
        let values = Matrix::zeros(2, 2);
        let mask = Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let err = MaskedDataset::new(
            values,
            mask,
            vec![0, 1],
            vec![FeatureKind::Numeric; 2],
            vec!["a".to_string(), "b".to_string()],
        );
        assert!(matches!(err, Err(Error::Data(_))));
    }

    #[test]
    fn rejects_non_binary_mask() {
        let values = Matrix::zeros(1, 2);
        let mask = Matrix::from_vec(1, 2, vec![1.0, 0.5]).unwrap();
        let err = MaskedDataset::new(
            values,
            mask,
            vec![0],
            vec![FeatureKind::Numeric; 2],
            vec!["a".to_string(), "b".to_string()],
        );
        assert!(matches!(err, Err(Error::Data(_))));
    }

    #[test]
    fn subset_rows_keeps_order_and_metadata() {
        let d = tiny();
        let s = d.subset_rows(&[2, 0]).unwrap();
        assert_eq!(s.values().row(0), &[5.0, 6.0]);
        assert_eq!(s.labels(), &[0, 0]);
        assert_eq!(s.names(), d.names());
    }

    #[test]
    fn missing_report_complete_data_is_all_zero() {
        let d = MaskedDataset::complete(
            Matrix::zeros(4, 3),
            vec![0, 1, 0, 1],
            vec![FeatureKind::Numeric; 3],
        )
        .unwrap();
        let r = d.missing_report();
        assert_eq!(r.overall, 0.0);
        assert!(r.per_feature.iter().all(|(_, rate)| *rate == 0.0));
    }

    #[test]
    fn missing_report_one_dead_column_of_four() {
        let mut mask = Matrix::filled(5, 4, 1.0);
        for r in 0..5 {
            mask.set(r, 2, 0.0);
        }
        // Keep at least one observed entry per row: other columns are full.
        let d = MaskedDataset::new(
            Matrix::zeros(5, 4),
            mask,
            vec![0; 5],
            vec![FeatureKind::Numeric; 4],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap();
        let r = d.missing_report();
        assert_eq!(r.per_feature[0], ("c".to_string(), 1.0));
        assert_abs_diff_eq!(r.overall, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn missing_report_concentrates_near_bernoulli_rate() {
        let p_miss = 0.0642;
        let (n, d) = (400, 40);
        let mut rng = crate::rng::stream_rng(5, crate::rng::Stream::Synthetic);
        let mut mask = Matrix::filled(n, d, 1.0);
        for r in 0..n {
            for c in 1..d {
                // Column 0 stays observed so no row goes fully missing.
                if rng.gen::<f64>() < p_miss {
                    mask.set(r, c, 0.0);
                }
            }
        }
        let ds = MaskedDataset::new(
            Matrix::zeros(n, d),
            mask,
            vec![0; n],
            vec![FeatureKind::Numeric; d],
            (0..d).map(|j| format!("f{j}")).collect(),
        )
        .unwrap();
        let r = ds.missing_report();
        assert!((r.overall - 0.064).abs() < 0.005, "overall {}", r.overall);
    }
}
