//! Worst-case energy-efficient on/off activation of intelligent reflecting
//! surface (IRS) elements under bounded channel-estimation error.
//!
//! The crate provides the channel model, continuous and quantized phase
//! design, closed-form worst-case SNR, an exact `O(L log L)` optimizer
//! ([`dp`]), a relaxation-and-rounding optimizer for quantized phases
//! ([`crbm`]), brute-force oracles ([`oracles`]) and a Monte-Carlo experiment
//! driver ([`experiment`]).

// `!(x > 0.0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod crbm;
pub mod dp;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod oracles;
pub mod phase;
pub mod seed;
pub mod solution;
pub mod worst_case;

pub use error::{Assumption, Error, Result};
pub use solution::{SolveStatus, Solution};
