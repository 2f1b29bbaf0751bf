//! Adam with coupled L2 weight decay (decay added to the gradient before the
//! moment updates).

use alloc::format;
use alloc::vec::Vec;
// Needed for float intrinsics under no_std; shadowed by inherent methods otherwise.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::network::{Gradients, Network};

#[derive(Debug, Clone, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub weight_decay: f64,
}

impl AdamConfig {
    pub fn new(learning_rate: f64) -> Self {
        AdamConfig {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            weight_decay: 0.0,
        }
    }

    pub fn with_weight_decay(mut self, weight_decay: f64) -> Self {
        self.weight_decay = weight_decay;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Config("Adam betas must lie in [0, 1)".into()));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::Config("Adam epsilon must be positive".into()));
        }
        if self.weight_decay < 0.0 {
            return Err(Error::Config("weight decay must be non-negative".into()));
        }
        Ok(())
    }
}

/// Optimizer state: first/second moment accumulators mirroring the network's
/// parameter blocks plus the bias-correction step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    cfg: AdamConfig,
    m: Vec<Matrix>,
    v: Vec<Matrix>,
    step_count: u64,
}

impl AdamState {
    pub fn new(net: &Network, cfg: AdamConfig) -> Result<Self> {
        cfg.validate()?;
        let m: Vec<Matrix> = net
            .params()
            .iter()
            .map(|p| Matrix::zeros(p.rows(), p.cols()))
            .collect();
        let v = m.clone();
        Ok(AdamState {
            cfg,
            m,
            v,
            step_count: 0,
        })
    }

    pub fn config(&self) -> &AdamConfig {
        &self.cfg
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One bias-corrected update: `θ -= lr · m̂ / (√v̂ + ε)` with the decay
    /// term `wd·θ` folded into the gradient first.
    pub fn step(&mut self, net: &mut Network, grads: &Gradients) -> Result<()> {
        if grads.blocks.len() != self.m.len() {
            return Err(Error::Shape(format!(
                "gradient has {} blocks, optimizer tracks {}",
                grads.blocks.len(),
                self.m.len()
            )));
        }
        if !grads.is_finite() {
            return Err(Error::Numeric("non-finite gradient passed to Adam".into()));
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = 1.0 - self.cfg.beta1.powi(t);
        let bc2 = 1.0 - self.cfg.beta2.powi(t);

        for ((param, grad), (m, v)) in net
            .params_mut()
            .into_iter()
            .zip(&grads.blocks)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            if param.rows() != grad.rows() || param.cols() != grad.cols() {
                return Err(Error::Shape("gradient block shape mismatch".into()));
            }
            let theta = param.as_mut_slice();
            for i in 0..theta.len() {
                let g = grad.as_slice()[i] + self.cfg.weight_decay * theta[i];
                let mi = self.cfg.beta1 * m.as_slice()[i] + (1.0 - self.cfg.beta1) * g;
                let vi = self.cfg.beta2 * v.as_slice()[i] + (1.0 - self.cfg.beta2) * g * g;
                m.as_mut_slice()[i] = mi;
                v.as_mut_slice()[i] = vi;
                let m_hat = mi / bc1;
                let v_hat = vi / bc2;
                theta[i] -= self.cfg.learning_rate * m_hat / (v_hat.sqrt() + self.cfg.epsilon);
            }
        }
        Ok(())
    }
}
