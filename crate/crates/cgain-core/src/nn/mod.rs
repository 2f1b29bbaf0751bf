//! Feed-forward network engine: two ReLU/dropout hidden layers behind an
//! optional input batch normalization, sigmoid outputs, reverse-mode
//! gradients, Adam with coupled weight decay, and a finite-difference
//! gradient checker.

mod adam;
mod gradcheck;
mod network;

pub use adam::{AdamConfig, AdamState};
pub use gradcheck::grad_check;
pub use network::{
    BatchNorm, Dense, ForwardCache, Gradients, Mode, Network, NetworkSpec, BN_EPS, BN_MOMENTUM,
    PROB_EPSILON,
};
