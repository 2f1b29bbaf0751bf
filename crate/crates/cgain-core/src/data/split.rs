//! Train/dev/test splitting and k-fold cross-validation plans.

use alloc::format;
use alloc::vec::Vec;
use rand::seq::SliceRandom;

use crate::data::dataset::MaskedDataset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// How to partition the samples.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitPlan {
    /// One train/dev/test split; fractions must sum to 1 and `dev` may be 0,
    /// in which case no dev part is produced.
    Ratios {
        train: f64,
        dev: f64,
        test: f64,
        stratified: bool,
        seed: u64,
    },
    /// `k` folds, each serving once as the test set with the rest as train.
    KFold { k: usize, stratified: bool, seed: u64 },
}

/// One split: disjoint index sets into the original dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub dev: Option<Vec<usize>>,
    pub test: Vec<usize>,
}

/// Apportions `total` into parts proportional to `fractions` using largest
/// remainders, so sizes are exact whenever the products are integral.
fn apportion(total: usize, fractions: &[f64]) -> Vec<usize> {
    let mut counts: Vec<usize> = fractions.iter().map(|f| (f * total as f64) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut remainders: Vec<(usize, f64)> = fractions
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f * total as f64 - counts[i] as f64))
        .collect();
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for k in 0..(total - assigned) {
        counts[remainders[k % remainders.len()].0] += 1;
    }
    counts
}

/// Splits the dataset per the plan. Index sets partition `0..n` exactly;
/// identical seeds yield identical splits. Stratified mode keeps the label
/// ratio of every part within one sample per class.
pub fn split(data: &MaskedDataset, plan: &SplitPlan) -> Result<Vec<SplitIndices>> {
    let n = data.n_samples();
    match *plan {
        SplitPlan::Ratios {
            train,
            dev,
            test,
            stratified,
            seed,
        } => {
            if train <= 0.0 || test <= 0.0 || dev < 0.0 {
                return Err(Error::Config("train/test fractions must be positive, dev non-negative".into()));
            }
            if (train + dev + test - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "split fractions sum to {}, expected 1",
                    train + dev + test
                )));
            }
            let groups = index_groups(data, stratified, seed);
            let mut parts = [Vec::new(), Vec::new(), Vec::new()];
            for group in groups {
                let counts = apportion(group.len(), &[train, dev, test]);
                let mut at = 0;
                for (part, &count) in parts.iter_mut().zip(&counts) {
                    part.extend_from_slice(&group[at..at + count]);
                    at += count;
                }
            }
            let [train_idx, dev_idx, test_idx] = parts;
            if train_idx.is_empty() || test_idx.is_empty() {
                return Err(Error::Config("split produced an empty train or test part".into()));
            }
            Ok(alloc::vec![SplitIndices {
                train: train_idx,
                dev: if dev > 0.0 { Some(dev_idx) } else { None },
                test: test_idx,
            }])
        }
        SplitPlan::KFold { k, stratified, seed } => {
            if k < 2 {
                return Err(Error::Config("k-fold needs k >= 2".into()));
            }
            if k > n {
                return Err(Error::Config(format!("{k} folds for {n} samples")));
            }
            let groups = index_groups(data, stratified, seed);
            if stratified {
                for group in &groups {
                    if group.len() < k {
                        return Err(Error::Config(format!(
                            "{k} folds but a class has only {} samples",
                            group.len()
                        )));
                    }
                }
            }
            let mut folds: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
            for group in groups {
                for (pos, idx) in group.into_iter().enumerate() {
                    folds[pos % k].push(idx);
                }
            }
            Ok((0..k)
                .map(|f| SplitIndices {
                    train: folds
                        .iter()
                        .enumerate()
                        .filter(|(g, _)| *g != f)
                        .flat_map(|(_, fold)| fold.iter().copied())
                        .collect(),
                    dev: None,
                    test: folds[f].clone(),
                })
                .collect())
        }
    }
}

/// Shuffled index groups: one group per class when stratified, otherwise a
/// single group of all indices.
fn index_groups(data: &MaskedDataset, stratified: bool, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = stream_rng(seed, Stream::Split);
    if stratified {
        let mut by_class = [Vec::new(), Vec::new()];
        for (i, &y) in data.labels().iter().enumerate() {
            by_class[y as usize].push(i);
        }
        let mut groups: Vec<Vec<usize>> =
            by_class.into_iter().filter(|g| !g.is_empty()).collect();
        for g in groups.iter_mut() {
            g.shuffle(&mut rng);
        }
        groups
    } else {
        let mut all: Vec<usize> = (0..data.n_samples()).collect();
        all.shuffle(&mut rng);
        alloc::vec![all]
    }
}
