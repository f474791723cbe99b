//! Numerical toolkit for risk pooling under infinite-mean laws.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It holds:
//!
//! - [`distributions`]: closed-form CDFs, generalized inverses and seeded
//!   samplers for Pareto, Fréchet, Cauchy, |Cauchy|, stable `S(α, β)`, deadly
//!   two-point risks and their affine, mixture and convex-map wrappers;
//! - [`orders`]: empirical first-order dominance with DKW bands and the
//!   skewness (convex-transform) order via relative inverse functions;
//! - [`classes`]: super Pareto / Fréchet / Cauchy membership and class `H`;
//! - [`stable_calculus`]: exact pooling of i.i.d. stable risks;
//! - [`pooling`]: Monte Carlo risk-sharing experiments and stop-loss values;
//! - [`bounds`]: necessary CDF bounds from partial CDF constraints.
//!
//! Sampling is deterministic in `(spec, seed, n)`. Batches are generated in
//! fixed-size blocks, each block drawing from its own counter-based stream,
//! so a parallel driver can fill blocks in any order and reproduce the
//! sequential output bit for bit.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod classes;
pub mod distributions;
mod error;
pub mod orders;
pub mod pooling;
pub mod quad;
pub mod rng;
mod roots;
pub mod stable_calculus;

pub use distributions::{DistributionSpec, SampleBatch, StableParams};
pub use error::{Error, Result};
