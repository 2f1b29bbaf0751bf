//! Central finite-difference verification of the analytic gradients.

// Needed for float intrinsics under no_std; shadowed by inherent methods otherwise.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::network::{Mode, Network};

/// Compares analytic parameter gradients against central finite differences
/// of `loss` and returns the largest relative error
/// `|analytic - numeric| / max(|analytic|, |numeric|, 1e-8)`.
///
/// `loss` maps network outputs to `(scalar, dLoss/dOutput)`. The same
/// `dropout_seed` feeds every forward pass, so the loss is a fixed smooth
/// function of the parameters even with dropout active.
pub fn grad_check(
    net: &mut Network,
    batch: &Matrix,
    eps: f64,
    dropout_seed: u64,
    loss: &dyn Fn(&Matrix) -> (f64, Matrix),
) -> Result<f64> {
    if net.mode() != Mode::Train {
        return Err(Error::State("grad_check differentiates the training-mode loss".into()));
    }
    if eps <= 0.0 {
        return Err(Error::Config("finite-difference step must be positive".into()));
    }

    let eval = |net: &Network| -> Result<(f64, Matrix)> {
        let mut rng = ChaCha12Rng::seed_from_u64(dropout_seed);
        let (out, _) = net.forward(batch, Some(&mut rng))?;
        Ok(loss(&out))
    };

    // Analytic pass.
    let analytic = {
        let mut rng = ChaCha12Rng::seed_from_u64(dropout_seed);
        let (out, cache) = net.forward(batch, Some(&mut rng))?;
        let (_, dout) = loss(&out);
        let (grads, _) = net.backward(&cache, &dout)?;
        grads
    };

    let mut max_rel = 0.0f64;
    let n_blocks = analytic.blocks.len();
    for block_idx in 0..n_blocks {
        let block_len = analytic.blocks[block_idx].as_slice().len();
        for i in 0..block_len {
            let original = net.params()[block_idx].as_slice()[i];

            net.params_mut()[block_idx].as_mut_slice()[i] = original + eps;
            let (loss_plus, _) = eval(net)?;
            net.params_mut()[block_idx].as_mut_slice()[i] = original - eps;
            let (loss_minus, _) = eval(net)?;
            net.params_mut()[block_idx].as_mut_slice()[i] = original;

            let numeric = (loss_plus - loss_minus) / (2.0 * eps);
            let a = analytic.blocks[block_idx].as_slice()[i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            if rel > max_rel {
                max_rel = rel;
            }
        }
    }
    Ok(max_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::network::NetworkSpec;
    use crate::rng::{stream_rng, Stream};
    use rand::Rng;

    fn random_batch(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = stream_rng(seed, Stream::Synthetic);
        let mut m = Matrix::zeros(rows, cols);
        for v in m.as_mut_slice() {
            *v = rng.gen::<f64>();
        }
        m
    }

    fn squared_loss(target: f64) -> impl Fn(&Matrix) -> (f64, Matrix) {
        move |out: &Matrix| {
            let n = out.rows() as f64;
            let mut loss = 0.0;
            let mut grad = Matrix::zeros(out.rows(), out.cols());
            for r in 0..out.rows() {
                for c in 0..out.cols() {
                    let d = out.get(r, c) - target;
                    loss += d * d / n;
                    grad.set(r, c, 2.0 * d / n);
                }
            }
            (loss, grad)
        }
    }

    fn cross_entropy_loss() -> impl Fn(&Matrix) -> (f64, Matrix) {
        |out: &Matrix| {
            let n = out.rows() as f64;
            let mut loss = 0.0;
            let mut grad = Matrix::zeros(out.rows(), out.cols());
            for r in 0..out.rows() {
                for c in 0..out.cols() {
                    let y = if (r + c) % 2 == 0 { 1.0 } else { 0.0 };
                    let p = out.get(r, c);
                    loss += -(y * p.ln() + (1.0 - y) * (1.0 - p).ln()) / n;
                    grad.set(r, c, (-y / p + (1.0 - y) / (1.0 - p)) / n);
                }
            }
            (loss, grad)
        }
    }

    #[test]
    fn effectively_linear_model_checks_to_machine_precision() {
        // Positive pass-through weights keep both ReLUs in their linear
        // region for positive inputs, so only the sigmoid is nonlinear and
        // central differences are nearly exact.
        let mut net =
            Network::zeros(NetworkSpec::new(2, 1, 1, 1).with_batchnorm(false)).unwrap();
        net.dense_mut(0).w = Matrix::from_vec(2, 1, vec![0.3, 0.2]).unwrap();
        net.dense_mut(0).b = Matrix::from_vec(1, 1, vec![0.4]).unwrap();
        net.dense_mut(1).w = Matrix::from_vec(1, 1, vec![1.0]).unwrap();
        net.dense_mut(2).w = Matrix::from_vec(1, 1, vec![1.0]).unwrap();
        let batch = random_batch(6, 2, 3);
        let err = grad_check(&mut net, &batch, 1e-5, 0, &squared_loss(0.7)).unwrap();
        assert!(err < 1e-9, "relative error {err}");
    }

    #[test]
    fn full_network_cross_entropy_checks_under_1e4() {
        let mut rng = stream_rng(21, Stream::GeneratorInit);
        let mut net = Network::new(NetworkSpec::new(4, 8, 6, 3), &mut rng).unwrap();
        let batch = random_batch(5, 4, 8);
        let err = grad_check(&mut net, &batch, 1e-5, 0, &cross_entropy_loss()).unwrap();
        assert!(err < 1e-4, "relative error {err}");
    }

    #[test]
    fn dropout_with_fixed_seed_still_checks() {
        let mut rng = stream_rng(22, Stream::GeneratorInit);
        let mut net =
            Network::new(NetworkSpec::new(4, 8, 6, 2).with_dropout(0.4), &mut rng).unwrap();
        let batch = random_batch(5, 4, 9);
        let err = grad_check(&mut net, &batch, 1e-5, 77, &squared_loss(0.5)).unwrap();
        assert!(err < 1e-4, "relative error {err}");
    }

    #[test]
    fn many_seeds_stay_under_tolerance() {
        let eps = 1e-5;
        let mut checked = 0;
        let mut seed = 0u64;
        while checked < 20 {
            let mut rng = stream_rng(seed, Stream::DiscriminatorInit);
            let mut net = Network::new(NetworkSpec::new(3, 6, 5, 2), &mut rng).unwrap();
            let batch = random_batch(4, 3, seed ^ 0x5a5a);
            seed += 1;
            // Skip draws whose pre-activations sit inside the FD window of a
            // ReLU kink; the comparison is undefined there.
            let (_, cache) = net.forward(&batch, None).unwrap();
            if cache.min_abs_preactivation() <= 10.0 * eps {
                continue;
            }
            let err = grad_check(&mut net, &batch, eps, 0, &cross_entropy_loss()).unwrap();
            assert!(err < 1e-4, "seed {seed}: relative error {err}");
            checked += 1;
        }
    }
}
