//! Extreme-eigenvalue tail probabilities for the real and complex Ginibre
//! ensembles.
//!
//! Three independent routes answer the same question, "how likely is the
//! extremal eigenvalue statistic to exceed `t`?":
//!
//! * closed forms (Kostlan's chi decomposition, incomplete-gamma sums),
//! * certified quadrature of the one-point intensity kernels,
//! * Monte Carlo simulation of full matrices or Kostlan moduli.
//!
//! Everything exponentially small is carried in log space
//! ([`specfun::LogValue`], [`exact_tails::LogProb`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod deviation;
pub mod error;
pub mod exact_tails;
pub mod kernels;
pub mod montecarlo;
pub mod quadrature;
pub mod sampling;
pub mod specfun;

pub use deviation::Beta;
pub use error::{Error, Result};
pub use exact_tails::{LogProb, ProbKind, Statistic, TailQuery};
pub use sampling::{SeedSpec, Spectrum};
