//! Grey wolf optimizer family (GWO, CGWO, AGWO, ACGWO), a PSO baseline, the
//! six-function benchmark harness, and a small swarm-trained MLP for binary
//! heart-disease classification.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the bottom of this file pin the common `f64` instantiations.

// `!(x > 0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchfns;
pub mod curves;
pub mod dataprep;
pub mod error;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod mlp;
pub mod optimizer;
pub mod scalar;
pub mod seed;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type CurveParams64 = curves::CurveParams<f64>;
pub type CurveParams32 = curves::CurveParams<f32>;
pub type SearchSpace64 = optimizer::SearchSpace<f64>;
pub type SearchSpace32 = optimizer::SearchSpace<f32>;
pub type GwoConfig64 = optimizer::GwoConfig<f64>;
pub type GwoConfig32 = optimizer::GwoConfig<f32>;
pub type PsoConfig64 = optimizer::PsoConfig<f64>;
pub type RunResult64 = optimizer::RunResult<f64>;
pub type RunResult32 = optimizer::RunResult<f32>;
pub type ParamVector64 = mlp::ParamVector<f64>;
pub type ParamVector32 = mlp::ParamVector<f32>;
pub type TrainReport64 = mlp::TrainReport<f64>;
