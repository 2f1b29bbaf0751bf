//! The network itself: spec, parameters, forward pass, reverse-mode backward.

use alloc::format;
use alloc::vec::Vec;
// Needed for float intrinsics under no_std; shadowed by inherent methods otherwise.
#[allow(unused_imports)]
use num_traits::Float;
use rand::distributions::{Distribution, Uniform};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Sigmoid outputs are clamped to `[PROB_EPSILON, 1 - PROB_EPSILON]` so every
/// log term downstream stays finite.
pub const PROB_EPSILON: f64 = 1e-7;

/// Batch-norm variance floor. Kept well below the 1e-6 tolerance at which the
/// normalized batch is expected to have unit variance.
pub const BN_EPS: f64 = 1e-8;

/// Fraction of the previous running statistic kept per update.
pub const BN_MOMENTUM: f64 = 0.9;

/// Architecture description: input width, two hidden widths, output width,
/// dropout rate applied after each hidden ReLU, and whether the input layer
/// is batch-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden1: usize,
    pub hidden2: usize,
    pub output_dim: usize,
    pub dropout_rate: f64,
    pub use_input_batchnorm: bool,
}

impl NetworkSpec {
    pub fn new(input_dim: usize, hidden1: usize, hidden2: usize, output_dim: usize) -> Self {
        Self {
            input_dim,
            hidden1,
            hidden2,
            output_dim,
            dropout_rate: 0.0,
            use_input_batchnorm: true,
        }
    }

    pub fn with_dropout(mut self, rate: f64) -> Self {
        self.dropout_rate = rate;
        self
    }

    pub fn with_batchnorm(mut self, on: bool) -> Self {
        self.use_input_batchnorm = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.hidden1 == 0 || self.hidden2 == 0 || self.output_dim == 0 {
            return Err(Error::Config("network dimensions must all be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::Config(format!(
                "dropout rate {} must lie in [0, 1)",
                self.dropout_rate
            )));
        }
        Ok(())
    }
}

/// Training vs inference behavior for dropout and batch normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// Dense layer parameters. Weights are `(in, out)` so a row-major batch
/// multiplies as `x · w + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Matrix,
    pub b: Matrix,
}

impl Dense {
    fn glorot(in_dim: usize, out_dim: usize, rng: &mut ChaCha12Rng) -> Self {
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let dist = Uniform::new_inclusive(-limit, limit);
        let mut w = Matrix::zeros(in_dim, out_dim);
        for v in w.as_mut_slice() {
            *v = dist.sample(rng);
        }
        Dense {
            w,
            b: Matrix::zeros(1, out_dim),
        }
    }

    fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Dense {
            w: Matrix::zeros(in_dim, out_dim),
            b: Matrix::zeros(1, out_dim),
        }
    }
}

/// Input-layer batch normalization with learnable scale/shift and running
/// statistics for inference.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchNorm {
    pub gamma: Matrix,
    pub beta: Matrix,
    pub running_mean: Matrix,
    pub running_var: Matrix,
}

impl BatchNorm {
    fn new(dim: usize) -> Self {
        BatchNorm {
            gamma: Matrix::filled(1, dim, 1.0),
            beta: Matrix::zeros(1, dim),
            running_mean: Matrix::zeros(1, dim),
            running_var: Matrix::filled(1, dim, 1.0),
        }
    }
}

/// A three-dense-layer sigmoid-output network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    spec: NetworkSpec,
    bn: Option<BatchNorm>,
    l1: Dense,
    l2: Dense,
    l3: Dense,
    mode: Mode,
    revision: u64,
}

/// Per-parameter gradient blocks, in the same order as [`Network::params`].
#[derive(Debug, Clone)]
pub struct Gradients {
    pub blocks: Vec<Matrix>,
}

impl Gradients {
    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(Matrix::is_finite)
    }
}

/// Everything `backward` needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    mode: Mode,
    revision: u64,
    /// Batch statistics: (normalized input, inverse std, batch mean, batch var).
    bn: Option<(Matrix, Matrix, Matrix, Matrix)>,
    a0: Matrix,
    z1: Matrix,
    d1: Matrix,
    z2: Matrix,
    d2: Matrix,
    sig: Matrix,
    mask1: Option<Matrix>,
    mask2: Option<Matrix>,
}

impl ForwardCache {
    /// Post-ReLU, post-dropout hidden activations (inputs to the next layer).
    pub fn hidden_activations(&self) -> (&Matrix, &Matrix) {
        (&self.d1, &self.d2)
    }

    /// Smallest |pre-activation| across both hidden layers. Finite-difference
    /// checks are only meaningful when this is well above the FD step, since
    /// a ReLU kink inside the perturbation window breaks the comparison.
    pub fn min_abs_preactivation(&self) -> f64 {
        self.z1
            .as_slice()
            .iter()
            .chain(self.z2.as_slice())
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Batch mean/variance recorded under training-mode batch normalization.
    pub fn batch_stats(&self) -> Option<(&Matrix, &Matrix)> {
        self.bn.as_ref().map(|(_, _, m, v)| (m, v))
    }

    /// The (possibly normalized) input that fed the first dense layer.
    pub fn first_layer_input(&self) -> &Matrix {
        &self.a0
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl Network {
    /// Fresh network with Glorot-uniform weights, zero biases, and identity
    /// batch-norm affine terms. Weight draws consume `rng` layer by layer in
    /// row-major order, so a given `(seed, stream)` always produces the same
    /// parameters.
    pub fn new(spec: NetworkSpec, rng: &mut ChaCha12Rng) -> Result<Self> {
        spec.validate()?;
        let bn = spec.use_input_batchnorm.then(|| BatchNorm::new(spec.input_dim));
        Ok(Network {
            l1: Dense::glorot(spec.input_dim, spec.hidden1, rng),
            l2: Dense::glorot(spec.hidden1, spec.hidden2, rng),
            l3: Dense::glorot(spec.hidden2, spec.output_dim, rng),
            bn,
            spec,
            mode: Mode::Train,
            revision: 0,
        })
    }

    /// All-zero dense parameters (batch-norm scale stays 1). Useful in tests:
    /// every output is sigmoid(0) = 0.5 regardless of input.
    pub fn zeros(spec: NetworkSpec) -> Result<Self> {
        spec.validate()?;
        let bn = spec.use_input_batchnorm.then(|| BatchNorm::new(spec.input_dim));
        Ok(Network {
            l1: Dense::zeros(spec.input_dim, spec.hidden1),
            l2: Dense::zeros(spec.hidden1, spec.hidden2),
            l3: Dense::zeros(spec.hidden2, spec.output_dim),
            bn,
            spec,
            mode: Mode::Train,
            revision: 0,
        })
    }

    /// Rebuilds a network from raw parts; used by the serializer.
    pub(crate) fn from_parts(
        spec: NetworkSpec,
        bn: Option<BatchNorm>,
        l1: Dense,
        l2: Dense,
        l3: Dense,
        mode: Mode,
    ) -> Self {
        Network {
            spec,
            bn,
            l1,
            l2,
            l3,
            mode,
            revision: 0,
        }
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    pub fn batchnorm(&self) -> Option<&BatchNorm> {
        self.bn.as_ref()
    }

    /// Mutable batch-norm access; counts as a parameter edit.
    pub fn batchnorm_mut(&mut self) -> Option<&mut BatchNorm> {
        self.revision += 1;
        self.bn.as_mut()
    }

    pub fn dense(&self, index: usize) -> &Dense {
        match index {
            0 => &self.l1,
            1 => &self.l2,
            2 => &self.l3,
            _ => panic!("dense layer index out of range: {index}"),
        }
    }

    /// Mutable layer access; counts as a parameter edit.
    pub fn dense_mut(&mut self, index: usize) -> &mut Dense {
        self.revision += 1;
        match index {
            0 => &mut self.l1,
            1 => &mut self.l2,
            2 => &mut self.l3,
            _ => panic!("dense layer index out of range: {index}"),
        }
    }

    /// Trainable parameter blocks in canonical order:
    /// `[bn_gamma, bn_beta,] w1, b1, w2, b2, w3, b3`.
    pub fn params(&self) -> Vec<&Matrix> {
        let mut v = Vec::with_capacity(8);
        if let Some(bn) = &self.bn {
            v.push(&bn.gamma);
            v.push(&bn.beta);
        }
        v.push(&self.l1.w);
        v.push(&self.l1.b);
        v.push(&self.l2.w);
        v.push(&self.l2.b);
        v.push(&self.l3.w);
        v.push(&self.l3.b);
        v
    }

    /// Mutable parameter blocks in canonical order; counts as a parameter edit.
    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        self.revision += 1;
        let mut v = Vec::with_capacity(8);
        if let Some(bn) = self.bn.as_mut() {
            v.push(&mut bn.gamma);
            v.push(&mut bn.beta);
        }
        v.push(&mut self.l1.w);
        v.push(&mut self.l1.b);
        v.push(&mut self.l2.w);
        v.push(&mut self.l2.b);
        v.push(&mut self.l3.w);
        v.push(&mut self.l3.b);
        v
    }

    /// All trainable parameters flattened into one vector (snapshot helper).
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in self.params() {
            out.extend_from_slice(p.as_slice());
        }
        out
    }

    pub fn param_count(&self) -> usize {
        self.params().iter().map(|p| p.as_slice().len()).sum()
    }

    /// Forward pass in the network's current mode.
    ///
    /// Training mode normalizes with batch statistics and applies inverted
    /// dropout; `dropout_rng` is required then (unless the dropout rate is 0)
    /// and ignored in inference mode. Running statistics are *not* touched;
    /// trainers call [`Network::update_batchnorm`] with the returned cache.
    pub fn forward(
        &self,
        batch: &Matrix,
        mut dropout_rng: Option<&mut ChaCha12Rng>,
    ) -> Result<(Matrix, ForwardCache)> {
        if batch.cols() != self.spec.input_dim {
            return Err(Error::Shape(format!(
                "batch has {} columns, network expects {}",
                batch.cols(),
                self.spec.input_dim
            )));
        }
        if batch.rows() == 0 {
            return Err(Error::Shape("empty batch".into()));
        }
        if !batch.is_finite() {
            return Err(Error::Numeric("non-finite network input".into()));
        }

        let training = self.mode == Mode::Train;
        let (a0, bn_cache) = match (&self.bn, training) {
            (Some(bn), true) => {
                let mean = batch.col_means();
                let var = batch.col_vars_biased(&mean);
                let inv_std = var.map(|v| 1.0 / (v + BN_EPS).sqrt());
                let mut x_hat = batch.clone();
                for r in 0..x_hat.rows() {
                    for c in 0..x_hat.cols() {
                        let v = (x_hat.get(r, c) - mean.get(0, c)) * inv_std.get(0, c);
                        x_hat.set(r, c, v);
                    }
                }
                let a0 = x_hat.mul_row_broadcast(&bn.gamma).add_row_broadcast(&bn.beta);
                (a0, Some((x_hat, inv_std, mean, var)))
            }
            (Some(bn), false) => {
                let inv_std = bn.running_var.map(|v| 1.0 / (v + BN_EPS).sqrt());
                let mut x_hat = batch.clone();
                for r in 0..x_hat.rows() {
                    for c in 0..x_hat.cols() {
                        let v = (x_hat.get(r, c) - bn.running_mean.get(0, c)) * inv_std.get(0, c);
                        x_hat.set(r, c, v);
                    }
                }
                let a0 = x_hat.mul_row_broadcast(&bn.gamma).add_row_broadcast(&bn.beta);
                (a0, None)
            }
            (None, _) => (batch.clone(), None),
        };

        let mut draw_mask = |rows: usize, cols: usize| -> Result<Option<Matrix>> {
            if !training || self.spec.dropout_rate == 0.0 {
                return Ok(None);
            }
            let rng = dropout_rng
                .as_deref_mut()
                .ok_or_else(|| Error::State("training forward with dropout needs an RNG".into()))?;
            let keep = 1.0 - self.spec.dropout_rate;
            let mut m = Matrix::zeros(rows, cols);
            for v in m.as_mut_slice() {
                let u: f64 = rand::Rng::gen(rng);
                *v = if u < self.spec.dropout_rate { 0.0 } else { 1.0 / keep };
            }
            Ok(Some(m))
        };

        let z1 = a0.matmul(&self.l1.w).add_row_broadcast(&self.l1.b);
        let a1 = z1.map(|v| v.max(0.0));
        let mask1 = draw_mask(a1.rows(), a1.cols())?;
        let d1 = match &mask1 {
            Some(m) => a1.hadamard(m),
            None => a1,
        };

        let z2 = d1.matmul(&self.l2.w).add_row_broadcast(&self.l2.b);
        let a2 = z2.map(|v| v.max(0.0));
        let mask2 = draw_mask(a2.rows(), a2.cols())?;
        let d2 = match &mask2 {
            Some(m) => a2.hadamard(m),
            None => a2,
        };

        let z3 = d2.matmul(&self.l3.w).add_row_broadcast(&self.l3.b);
        let sig = z3.map(sigmoid);
        let out = sig.map(|v| v.clamp(PROB_EPSILON, 1.0 - PROB_EPSILON));

        let cache = ForwardCache {
            mode: self.mode,
            revision: self.revision,
            bn: bn_cache,
            a0,
            z1,
            d1,
            z2,
            d2,
            sig,
            mask1,
            mask2,
        };
        Ok((out, cache))
    }

    /// Inference outputs regardless of the stored mode: running batch-norm
    /// statistics, dropout as identity. Safe to call on a shared reference.
    pub fn infer(&self, batch: &Matrix) -> Result<Matrix> {
        if self.mode == Mode::Eval {
            return self.forward(batch, None).map(|(out, _)| out);
        }
        let mut snapshot = self.clone();
        snapshot.set_mode(Mode::Eval);
        snapshot.forward(batch, None).map(|(out, _)| out)
    }

    /// Folds a training-forward's batch statistics into the running
    /// statistics: `running = BN_MOMENTUM·running + (1-BN_MOMENTUM)·batch`.
    pub fn update_batchnorm(&mut self, cache: &ForwardCache) {
        if let (Some(bn), Some((_, _, mean, var))) = (self.bn.as_mut(), cache.bn.as_ref()) {
            for c in 0..mean.cols() {
                let rm = bn.running_mean.get(0, c);
                let rv = bn.running_var.get(0, c);
                bn.running_mean
                    .set(0, c, BN_MOMENTUM * rm + (1.0 - BN_MOMENTUM) * mean.get(0, c));
                bn.running_var
                    .set(0, c, BN_MOMENTUM * rv + (1.0 - BN_MOMENTUM) * var.get(0, c));
            }
        }
    }

    /// Reverse-mode gradients for a training-mode forward.
    ///
    /// `output_grad` is dLoss/dOutput on the clamped outputs. Returns one
    /// gradient block per parameter block plus dLoss/dInput (the path that
    /// lets a frozen discriminator steer the networks feeding it).
    pub fn backward(&self, cache: &ForwardCache, output_grad: &Matrix) -> Result<(Gradients, Matrix)> {
        if cache.mode != Mode::Train {
            return Err(Error::State(
                "backward requires a cache from a training-mode forward".into(),
            ));
        }
        if cache.revision != self.revision {
            return Err(Error::State(
                "stale forward cache: parameters changed since the forward pass".into(),
            ));
        }
        if output_grad.rows() != cache.sig.rows() || output_grad.cols() != cache.sig.cols() {
            return Err(Error::Shape(format!(
                "output grad is {}x{}, expected {}x{}",
                output_grad.rows(),
                output_grad.cols(),
                cache.sig.rows(),
                cache.sig.cols()
            )));
        }

        // Clamp passes gradient only strictly inside the clamp band; the
        // sigmoid derivative uses the unclamped value.
        let dz3 = cache.sig.zip_map(output_grad, |s, g| {
            if s > PROB_EPSILON && s < 1.0 - PROB_EPSILON {
                g * s * (1.0 - s)
            } else {
                0.0
            }
        });

        let dw3 = cache.d2.matmul_at_b(&dz3);
        let db3 = dz3.col_sums();
        let dd2 = dz3.matmul_a_bt(&self.l3.w);

        let da2 = match &cache.mask2 {
            Some(m) => dd2.hadamard(m),
            None => dd2,
        };
        let dz2 = da2.zip_map(&cache.z2, |g, z| if z > 0.0 { g } else { 0.0 });

        let dw2 = cache.d1.matmul_at_b(&dz2);
        let db2 = dz2.col_sums();
        let dd1 = dz2.matmul_a_bt(&self.l2.w);

        let da1 = match &cache.mask1 {
            Some(m) => dd1.hadamard(m),
            None => dd1,
        };
        let dz1 = da1.zip_map(&cache.z1, |g, z| if z > 0.0 { g } else { 0.0 });

        let dw1 = cache.a0.matmul_at_b(&dz1);
        let db1 = dz1.col_sums();
        let da0 = dz1.matmul_a_bt(&self.l1.w);

        let mut blocks = Vec::with_capacity(8);
        let input_grad = match (&self.bn, &cache.bn) {
            (Some(bn), Some((x_hat, inv_std, _, _))) => {
                let n = da0.rows() as f64;
                let dgamma = da0.hadamard(x_hat).col_sums();
                let dbeta = da0.col_sums();
                let dxhat = da0.mul_row_broadcast(&bn.gamma);
                let sum_dxhat = dxhat.col_sums();
                let sum_dxhat_xhat = dxhat.hadamard(x_hat).col_sums();
                let mut dx = Matrix::zeros(da0.rows(), da0.cols());
                for r in 0..dx.rows() {
                    for c in 0..dx.cols() {
                        let v = inv_std.get(0, c) / n
                            * (n * dxhat.get(r, c)
                                - sum_dxhat.get(0, c)
                                - x_hat.get(r, c) * sum_dxhat_xhat.get(0, c));
                        dx.set(r, c, v);
                    }
                }
                blocks.push(dgamma);
                blocks.push(dbeta);
                dx
            }
            (None, None) => da0,
            _ => {
                return Err(Error::State(
                    "cache batch-norm record does not match network".into(),
                ))
            }
        };

        blocks.push(dw1);
        blocks.push(db1);
        blocks.push(dw2);
        blocks.push(db2);
        blocks.push(dw3);
        blocks.push(db3);
        Ok((Gradients { blocks }, input_grad))
    }
}
