//! Missing-completely-at-random mask simulation.

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use crate::data::dataset::MaskedDataset;
use crate::error::{Error, Result};
use crate::rng::{row_rng, RowTag};

const MAX_ROW_RETRIES: usize = 100;

/// Independently flips each observed entry in the feature subset to missing
/// with probability `rate`. Existing missingness is preserved and no row is
/// allowed to end up fully missing: an offending row's draw is retried a
/// bounded number of times, after which one of its candidate entries is
/// chosen uniformly to stay observed.
///
/// Each row draws from its own `(seed, row)` stream, so results are
/// deterministic per seed and independent of row processing order.
pub fn apply_mcar(
    data: &MaskedDataset,
    rate: f64,
    feature_subset: &[usize],
    seed: u64,
) -> Result<MaskedDataset> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Config(format!("missing rate {rate} must lie in [0, 1]")));
    }
    if feature_subset.is_empty() {
        return Err(Error::Config("feature subset must be non-empty".into()));
    }
    let d = data.n_features();
    let mut subset: Vec<usize> = feature_subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if let Some(&bad) = subset.iter().find(|&&j| j >= d) {
        return Err(Error::Config(format!("feature index {bad} out of range (d = {d})")));
    }

    let mut mask = data.mask().clone();
    for i in 0..data.n_samples() {
        // Entries outside the subset are untouched; if any of those is
        // observed the row cannot die no matter what the draw does.
        let row_safe = (0..d).any(|j| data.mask().get(i, j) == 1.0 && !subset.contains(&j));
        let candidates: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&j| data.mask().get(i, j) == 1.0)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        if rate >= 1.0 && !row_safe {
            return Err(Error::Config(format!(
                "rate 1.0 would leave row {i} fully missing"
            )));
        }

        let mut rng = row_rng(seed, RowTag::McarMask, i);
        let mut flips: Vec<bool> = Vec::with_capacity(candidates.len());
        let mut attempts = 0;
        loop {
            flips.clear();
            flips.extend(candidates.iter().map(|_| rng.gen::<f64>() < rate));
            if row_safe || !flips.iter().all(|&f| f) {
                break;
            }
            attempts += 1;
            if attempts >= MAX_ROW_RETRIES {
                // Keep one candidate observed, chosen uniformly.
                let keep = rng.gen_range(0..candidates.len());
                flips[keep] = false;
                break;
            }
        }
        for (&j, &flip) in candidates.iter().zip(&flips) {
            if flip {
                mask.set(i, j, 0.0);
            }
        }
    }

    // Scrub placeholders so freshly missing cells don't leak their values.
    let mut values = data.values().clone();
    for i in 0..values.rows() {
        for j in 0..values.cols() {
            if mask.get(i, j) == 0.0 {
                values.set(i, j, 0.0);
            }
        }
    }
    MaskedDataset::new(
        values,
        mask,
        data.labels().to_vec(),
        data.kinds().to_vec(),
        data.names().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::dataset::FeatureKind;
    use crate::matrix::Matrix;
    use alloc::vec;

    fn complete(n: usize, d: usize) -> MaskedDataset {
        let mut values = Matrix::zeros(n, d);
        for (i, v) in values.as_mut_slice().iter_mut().enumerate() {
            *v = i as f64 * 0.01 + 1.0;
        }
        MaskedDataset::complete(values, vec![0; n], vec![FeatureKind::Numeric; d]).unwrap()
    }

    #[test]
    fn rate_zero_changes_nothing() {
        let data = complete(20, 5);
        let out = apply_mcar(&data, 0.0, &[0, 1, 2, 3, 4], 1).unwrap();
        assert_eq!(out.mask(), data.mask());
        assert_eq!(out.values(), data.values());
    }

    #[test]
    fn rate_one_on_all_columns_of_complete_data_is_a_config_error() {
        let data = complete(4, 3);
        let err = apply_mcar(&data, 1.0, &[0, 1, 2], 1);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn rate_one_on_a_strict_subset_is_fine() {
        let data = complete(4, 3);
        let out = apply_mcar(&data, 1.0, &[0, 1], 9).unwrap();
        for i in 0..4 {
            assert_eq!(out.mask().get(i, 0), 0.0);
            assert_eq!(out.mask().get(i, 1), 0.0);
            assert_eq!(out.mask().get(i, 2), 1.0);
        }
    }

    #[test]
    fn empirical_rate_concentrates() {
        let data = complete(1000, 10);
        let out = apply_mcar(&data, 0.3, &(0..10).collect::<Vec<_>>(), 5).unwrap();
        let observed: f64 = out.mask().as_slice().iter().sum();
        let missing_frac = 1.0 - observed / 10_000.0;
        assert!(
            (0.28..=0.32).contains(&missing_frac),
            "missing fraction {missing_frac}"
        );
    }

    #[test]
    fn existing_missingness_is_preserved_and_no_row_dies() {
        let data = complete(200, 3);
        let once = apply_mcar(&data, 0.6, &[0, 1, 2], 2).unwrap();
        let twice = apply_mcar(&once, 0.6, &[0, 1, 2], 3).unwrap();
        for i in 0..200 {
            assert!((0..3).any(|j| twice.mask().get(i, j) == 1.0), "row {i} died");
            for j in 0..3 {
                // Never resurrects a missing cell.
                assert!(twice.mask().get(i, j) <= once.mask().get(i, j));
            }
        }
    }

    #[test]
    fn very_high_rate_still_keeps_rows_alive_via_forced_keep() {
        let data = complete(50, 4);
        let out = apply_mcar(&data, 0.999, &[0, 1, 2, 3], 8).unwrap();
        for i in 0..50 {
            assert!((0..4).any(|j| out.mask().get(i, j) == 1.0));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let data = complete(100, 6);
        let a = apply_mcar(&data, 0.4, &[0, 1, 2, 3, 4, 5], 77).unwrap();
        let b = apply_mcar(&data, 0.4, &[0, 1, 2, 3, 4, 5], 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_range_rate_or_empty_subset_rejected() {
        let data = complete(5, 2);
        assert!(matches!(apply_mcar(&data, 1.5, &[0], 0), Err(Error::Config(_))));
        assert!(matches!(apply_mcar(&data, 0.5, &[], 0), Err(Error::Config(_))));
        assert!(matches!(apply_mcar(&data, 0.5, &[7], 0), Err(Error::Config(_))));
    }
}
