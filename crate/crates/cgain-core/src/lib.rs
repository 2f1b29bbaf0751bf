//! Core algorithms for adversarial missing-value imputation with
//! label-aware joint training.
//!
//! The crate provides, with no IO dependencies:
//!
//! - a small double-precision feed-forward network engine with input batch
//!   normalization, ReLU/dropout hidden layers, sigmoid outputs, reverse-mode
//!   gradients, Adam, and a finite-difference gradient checker ([`nn`]);
//! - masked tabular datasets, min-max scaling, MCAR mask simulation,
//!   synthetic data generation, and splitting ([`data`]);
//! - mean/mode and chained-equations baseline imputers ([`impute`]);
//! - the adversarial imputer with hint mechanism ([`gain`]) and its
//!   classifier-guided three-player variant ([`cgain`]);
//! - a plain supervised classifier trainer ([`classifier`]);
//! - evaluation metrics and multi-run aggregation ([`metrics`]);
//! - bit-exact text serialization for trained models ([`serialize`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature
//! (default) is only forwarded to dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cgain;
pub mod classifier;
pub mod data;
pub mod error;
pub mod gain;
pub mod impute;
pub mod matrix;
pub mod metrics;
pub mod nn;
pub mod rng;
pub mod serialize;

pub use error::{Error, Result};
pub use matrix::Matrix;
