//! Discrete-time linear active disturbance rejection control (ADRC).
//!
//! The crate is organized bottom-up:
//!
//! - [`tuning`]: bandwidth-parameterized controller and observer gains, both
//!   quasi-continuous and by exact discrete-time pole placement.
//! - [`discretize`]: ZOH models of the integrator chain, the current-observer
//!   ESO matrices, closed-form transfer-function coefficients for first- and
//!   second-order ADRC, and a Leverrier–Faddeev oracle that re-derives those
//!   coefficients from the state-space matrices.
//! - [`controllers`]: the six runtime realizations (state space, single
//!   transfer function, dual-feedback transfer function; each output- and
//!   error-based) behind one two-phase `step`/`commit` contract, plus the
//!   magnitude/rate limiter.
//! - [`sim`]: a fixed-step closed-loop harness with exact ZOH plants, an
//!   averaged buck-converter model, seeded measurement noise and trace export.

pub mod controllers;
pub mod discretize;
mod error;
pub mod export;
pub mod poly;
pub mod sim;
pub mod tuning;

pub use error::{AdrcError, Result};
