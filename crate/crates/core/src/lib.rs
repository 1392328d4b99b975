//! Probabilistic transmission network expansion planning with a modified
//! artificial bee colony search and point estimate uncertainty handling.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caseio;
pub mod cli;
pub mod constraints;
pub mod datasets;
pub mod mabc;
pub mod network;
pub mod pem;
pub mod planner;
pub mod powerflow;
pub mod uncertainty;
