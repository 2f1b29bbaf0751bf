//! Non-adversarial baseline imputers: column mean/mode filling and
//! chained-equations regression imputation.
//!
//! Both imputers follow a fit/transform split so the experiment harness can
//! fit on the training rows only and apply the fitted state to held-out
//! data. The one-shot entry points fit and transform the same dataset.

mod mice;
mod simple;

pub use mice::{mice_impute, ChainedImputerConfig, MiceFit, MiceModel};
pub use simple::{simple_impute, SimpleImputer};
