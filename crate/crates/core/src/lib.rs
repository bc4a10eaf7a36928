//! Mobility- and migration-aware task offloading for UE / fog / cloud
//! networks: the cost model, sojourn-time mobility prediction, the MOFCO
//! solver and baseline policies, and a discrete-event engine that replays
//! mobility traces against them.
//!
//! A typical run loads a [`traceio::Scenario`], builds an
//! [`engine::Instance`] for a seed and hands it to [`engine::run`] with a
//! [`policy::Policy`]; [`experiment::run_algorithms`] does this for several
//! policies on the same instance.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod mobility;
pub mod model;
pub mod policy;
pub mod range;
pub mod report;
pub mod solver;
pub mod traceio;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Constraint, Error, Result};
