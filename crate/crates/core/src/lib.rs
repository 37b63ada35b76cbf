//! Linear centralization classification.
//!
//! The classifier learns a projection `β ∈ [−1, 1]ⁿ` by solving a linear
//! program that pushes the projected class centers apart while every
//! training instance is kept nearer its own center, with a slack per
//! instance. The crate ships the LP solver, the linear and kernel trainers,
//! alternative 1-D discriminators, reference baselines, and the evaluation
//! harness used to compare them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod data;
pub mod discriminators;
pub mod error;
pub mod eval;
pub mod kernel;
pub mod lcc;
pub mod lp;
pub mod methods;
pub mod model_io;

pub use data::{Dataset, Label};
pub use error::{Error, Result};
pub use lcc::{train_lcc, LccModel, DEFAULT_LAMBDA, DEFAULT_SIGMA};
