//! Min-max scaling of observed numeric entries to [0, 1], as the sigmoid
//! generator outputs require.

use alloc::vec::Vec;

use crate::data::dataset::{FeatureKind, MaskedDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Per-feature ranges fitted on observed entries only.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerState {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
    pub kinds: Vec<FeatureKind>,
}

/// Fits per-feature min/max over observed cells. Binary features are
/// recorded but passed through by [`scale`].
pub fn fit_scaler(data: &MaskedDataset) -> Result<ScalerState> {
    let d = data.n_features();
    let mut mins = alloc::vec![f64::INFINITY; d];
    let mut maxs = alloc::vec![f64::NEG_INFINITY; d];
    for i in 0..data.n_samples() {
        for j in 0..d {
            if data.mask().get(i, j) == 1.0 {
                let v = data.values().get(i, j);
                if v < mins[j] {
                    mins[j] = v;
                }
                if v > maxs[j] {
                    maxs[j] = v;
                }
            }
        }
    }
    for j in 0..d {
        if mins[j] > maxs[j] {
            return Err(Error::Data(alloc::format!(
                "feature {} has no observed values to fit",
                data.names()[j]
            )));
        }
    }
    Ok(ScalerState {
        mins,
        maxs,
        kinds: data.kinds().to_vec(),
    })
}

fn scale_cell(v: f64, min: f64, max: f64) -> f64 {
    if max == min {
        0.0
    } else {
        ((v - min) / (max - min)).clamp(0.0, 1.0)
    }
}

/// Maps observed numeric cells into [0, 1] with the fitted ranges; values
/// outside the fitted range (possible when transforming held-out data) land
/// on the boundary. Binary features and the mask are untouched; missing
/// cells are reset to the 0 placeholder.
pub fn scale(data: &MaskedDataset, state: &ScalerState) -> Result<MaskedDataset> {
    let d = data.n_features();
    if state.mins.len() != d {
        return Err(Error::State(alloc::format!(
            "scaler fitted on {} features, data has {}",
            state.mins.len(),
            d
        )));
    }
    let mut values = Matrix::zeros(data.n_samples(), d);
    for i in 0..data.n_samples() {
        for j in 0..d {
            if data.mask().get(i, j) == 1.0 {
                let v = data.values().get(i, j);
                let s = match state.kinds[j] {
                    FeatureKind::Numeric => scale_cell(v, state.mins[j], state.maxs[j]),
                    FeatureKind::Binary => v,
                };
                values.set(i, j, s);
            }
        }
    }
    data.with_values(values)
}

/// Inverse of [`scale`] on observed cells; missing cells stay at the
/// placeholder.
pub fn unscale(data: &MaskedDataset, state: &ScalerState) -> Result<MaskedDataset> {
    let d = data.n_features();
    if state.mins.len() != d {
        return Err(Error::State("scaler width mismatch".into()));
    }
    let mut values = Matrix::zeros(data.n_samples(), d);
    for i in 0..data.n_samples() {
        for j in 0..d {
            if data.mask().get(i, j) == 1.0 {
                let v = data.values().get(i, j);
                let u = match state.kinds[j] {
                    FeatureKind::Numeric => v * (state.maxs[j] - state.mins[j]) + state.mins[j],
                    FeatureKind::Binary => v,
                };
                values.set(i, j, u);
            }
        }
    }
    data.with_values(values)
}

/// Maps a completed value matrix (every cell meaningful) back to original
/// units.
pub fn unscale_matrix(completed: &Matrix, state: &ScalerState) -> Result<Matrix> {
    if completed.cols() != state.mins.len() {
        return Err(Error::State("scaler width mismatch".into()));
    }
    let mut out = completed.clone();
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            if state.kinds[j] == FeatureKind::Numeric {
                let v = out.get(i, j) * (state.maxs[j] - state.mins[j]) + state.mins[j];
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn dataset(values: Vec<f64>, mask: Vec<f64>, rows: usize, cols: usize) -> MaskedDataset {
        MaskedDataset::new(
            Matrix::from_vec(rows, cols, values).unwrap(),
            Matrix::from_vec(rows, cols, mask).unwrap(),
            vec![0; rows],
            vec![FeatureKind::Numeric; cols],
            (0..cols).map(|j| alloc::format!("f{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn three_point_column_scales_to_unit_interval() {
        let data = dataset(vec![2.0, 4.0, 6.0], vec![1.0, 1.0, 1.0], 3, 1);
        let state = fit_scaler(&data).unwrap();
        let scaled = scale(&data, &state).unwrap();
        assert_eq!(scaled.values().as_slice(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let data = dataset(vec![5.0, 5.0], vec![1.0, 1.0], 2, 1);
        let state = fit_scaler(&data).unwrap();
        let scaled = scale(&data, &state).unwrap();
        assert_eq!(scaled.values().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn round_trip_is_identity_on_observed_cells() {
        let mut rng = crate::rng::stream_rng(13, crate::rng::Stream::Synthetic);
        let (n, d) = (40, 6);
        let mut values = vec![0.0; n * d];
        let mut mask = vec![1.0; n * d];
        for v in values.iter_mut() {
            *v = rng.gen::<f64>() * 200.0 - 100.0;
        }
        for (idx, m) in mask.iter_mut().enumerate() {
            if idx % d != 0 && rng.gen::<f64>() < 0.3 {
                *m = 0.0;
            }
        }
        let data = dataset(values, mask, n, d);
        let state = fit_scaler(&data).unwrap();
        let scaled = scale(&data, &state).unwrap();
        for &v in scaled.values().as_slice() {
            assert!((0.0..=1.0).contains(&v));
        }
        let back = unscale(&scaled, &state).unwrap();
        for i in 0..n {
            for j in 0..d {
                if data.mask().get(i, j) == 1.0 {
                    assert_abs_diff_eq!(
                        back.values().get(i, j),
                        data.values().get(i, j),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn fit_ignores_missing_cells_and_binary_passes_through() {
        let values = vec![10.0, 1.0, 999.0, 0.0, 20.0, 1.0];
        let mask = vec![1.0, 1.0, 0.0, 1.0, 1.0, 1.0];
        let mut data = dataset(values, mask, 3, 2);
        data = MaskedDataset::new(
            data.values().clone(),
            data.mask().clone(),
            data.labels().to_vec(),
            vec![FeatureKind::Numeric, FeatureKind::Binary],
            data.names().to_vec(),
        )
        .unwrap();
        let state = fit_scaler(&data).unwrap();
        // The masked 999 must not stretch the range.
        assert_eq!(state.mins[0], 10.0);
        assert_eq!(state.maxs[0], 20.0);
        let scaled = scale(&data, &state).unwrap();
        assert_eq!(scaled.values().get(0, 1), 1.0);
        assert_eq!(scaled.values().get(1, 1), 0.0);
    }
}
