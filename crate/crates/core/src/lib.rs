//! Kernel estimation of bivariate copulas and goodness-of-fit testing.
//!
//! The crate provides parametric copula families, the empirical copula and
//! five boundary-aware kernel estimators, plug-in bandwidth rules, bootstrap
//! goodness-of-fit tests and a Monte Carlo harness.

pub mod bandwidth;
pub mod data;
pub mod error;
pub mod estimators;
pub mod families;
pub mod gof;
pub mod harness;
pub mod kernels;
pub mod quad;
pub mod special;

pub use data::Sample;
pub use error::{Error, Result};
pub use estimators::{EstimatorConfig, EstimatorKind, EvalGrid, PseudoSample, PseudoVariant};
pub use families::{CopulaSpec, Family};
pub use gof::{GofReport, StatKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/bandwidth.md")]
    mod bandwidth {}
    #[doc = include_str!("../../../book/src/gof.md")]
    mod gof {}
    #[doc = include_str!("../../../book/src/simulations.md")]
    mod simulations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
