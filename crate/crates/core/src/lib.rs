//! Frequency-based Kelly-optimal portfolios over finite scenario return
//! models.
//!
//! The account rebalances every `n` steps, so the objective is the per-step
//! expected log growth `g_n(K) = E[log(1 + K^T X_n)] / n` of the compound
//! return vector `X_n`, maximized over the unit simplex. Working with finite
//! scenario sets keeps every expectation exact, which makes optimality
//! checkable rather than approximate:
//!
//! - [`returns_model`] represents one-step joint return distributions and
//!   derives exact or sampled compound distributions;
//! - [`elg`] evaluates `g_n` and its gradient;
//! - [`solver`] maximizes `g_n` by projected gradient ascent, with a
//!   brute-force grid oracle for cross-checking;
//! - [`certificates`] verifies candidates against the expected-ratio
//!   optimality conditions and runs the dominant-asset test;
//! - [`asymptotics`] simulates relative-wealth paths, checks the
//!   `(2 log n)/n` almost-sure bound, and validates account survival;
//! - [`backtest`] runs the dominant-ratio trading strategy over historical
//!   price CSVs against buy-and-hold baselines.
//!
//! Solve-then-certify for the classic two-point stock against cash:
//!
//! ```
//! use kelly_core::certificates::{kkt_certify, DEFAULT_CERT_TOL, DEFAULT_SUPPORT_EPS};
//! use kelly_core::returns_model::JointReturnDistribution;
//! use kelly_core::solver::{solve, SolveOptions};
//!
//! # fn main() -> kelly_core::Result<()> {
//! let dist = JointReturnDistribution::new(vec![vec![0.5], vec![-0.3]], vec![0.5, 0.5])?
//!     .with_riskless(0.0)?;
//! let result = solve(&dist, 1, &SolveOptions::default())?;
//! assert!((result.weights.as_slice()[0] - 2.0 / 3.0).abs() < 1e-6);
//!
//! let cert = kkt_certify(
//!     &dist.compound_exact(1)?,
//!     &result.weights,
//!     DEFAULT_CERT_TOL,
//!     DEFAULT_SUPPORT_EPS,
//! )?;
//! assert!(cert.pass);
//! # Ok(())
//! # }
//! ```

pub mod asymptotics;
pub mod backtest;
pub mod certificates;
pub mod elg;
mod error;
pub mod returns_model;
pub(crate) mod sampling;
pub mod solver;

pub use error::{Error, Result};
