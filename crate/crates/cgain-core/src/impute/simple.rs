//! Column-wise mean (numeric) / mode (binary) imputation.

use alloc::format;
use alloc::vec::Vec;

use crate::data::{FeatureKind, MaskedDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Fitted fill values, one per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleImputer {
    fills: Vec<f64>,
}

impl SimpleImputer {
    /// Fits column means (numeric) and modes (binary) on observed cells.
    /// A column with no observed values is a data error. Mode ties resolve
    /// to 0.
    pub fn fit(data: &MaskedDataset) -> Result<Self> {
        let d = data.n_features();
        let mut fills = Vec::with_capacity(d);
        for j in 0..d {
            let mut count = 0usize;
            let mut sum = 0.0;
            let mut ones = 0usize;
            for i in 0..data.n_samples() {
                if data.mask().get(i, j) == 1.0 {
                    count += 1;
                    let v = data.values().get(i, j);
                    sum += v;
                    if v == 1.0 {
                        ones += 1;
                    }
                }
            }
            if count == 0 {
                return Err(Error::Data(format!(
                    "feature {} is fully missing; cannot fit an imputer",
                    data.names()[j]
                )));
            }
            let fill = match data.kinds()[j] {
                FeatureKind::Numeric => sum / count as f64,
                FeatureKind::Binary => {
                    if ones * 2 > count {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            fills.push(fill);
        }
        Ok(SimpleImputer { fills })
    }

    /// Completes the dataset: missing cells take the fitted fill, observed
    /// cells are copied through bit for bit.
    pub fn transform(&self, data: &MaskedDataset) -> Result<Matrix> {
        if self.fills.len() != data.n_features() {
            return Err(Error::State("imputer fitted on a different width".into()));
        }
        let mut out = data.values().clone();
        for i in 0..out.rows() {
            for j in 0..out.cols() {
                if data.mask().get(i, j) == 0.0 {
                    out.set(i, j, self.fills[j]);
                }
            }
        }
        Ok(out)
    }

    pub fn fills(&self) -> &[f64] {
        &self.fills
    }
}

/// One-shot fit and complete on the same dataset.
pub fn simple_impute(data: &MaskedDataset) -> Result<Matrix> {
    SimpleImputer::fit(data)?.transform(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dataset(
        values: Vec<f64>,
        mask: Vec<f64>,
        rows: usize,
        kinds: Vec<FeatureKind>,
    ) -> MaskedDataset {
        let cols = kinds.len();
        MaskedDataset::new(
            Matrix::from_vec(rows, cols, values).unwrap(),
            Matrix::from_vec(rows, cols, mask).unwrap(),
            vec![0; rows],
            kinds,
            (0..cols).map(|j| format!("f{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn complete_data_is_returned_unchanged() {
        let data = dataset(
            vec![1.5, 0.0, 2.5, 1.0],
            vec![1.0; 4],
            2,
            vec![FeatureKind::Numeric, FeatureKind::Binary],
        );
        let out = simple_impute(&data).unwrap();
        assert_eq!(out, *data.values());
    }

    #[test]
    fn numeric_missing_gets_the_observed_mean() {
        let data = dataset(
            vec![1.0, 9.0, 3.0, 9.0, 0.0, 9.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0],
            3,
            vec![FeatureKind::Numeric, FeatureKind::Numeric],
        );
        let out = simple_impute(&data).unwrap();
        assert_eq!(out.get(2, 0), 2.0);
    }

    #[test]
    fn binary_missing_gets_the_mode() {
        let data = dataset(
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0],
            4,
            vec![FeatureKind::Binary, FeatureKind::Numeric],
        );
        let out = simple_impute(&data).unwrap();
        assert_eq!(out.get(3, 0), 1.0);
    }

    #[test]
    fn mode_tie_resolves_to_zero() {
        let data = dataset(
            vec![1.0, 1.0, 0.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0],
            3,
            vec![FeatureKind::Binary, FeatureKind::Numeric],
        );
        let out = simple_impute(&data).unwrap();
        assert_eq!(out.get(2, 0), 0.0);
    }

    #[test]
    fn observed_cells_survive_bitwise() {
        let data = dataset(
            vec![0.1, -0.0, 7.25, 3.0, 0.0, 4.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0],
            3,
            vec![FeatureKind::Numeric, FeatureKind::Numeric],
        );
        let out = simple_impute(&data).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                if data.mask().get(i, j) == 1.0 {
                    assert_eq!(
                        out.get(i, j).to_bits(),
                        data.values().get(i, j).to_bits()
                    );
                }
            }
        }
    }
}
