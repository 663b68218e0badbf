//! Finite-state objectives for comparing accounts of agency.
//!
//! The crate evaluates expected utility, expected free energy (EFE) and
//! information-theoretic bounded rationality (ITBR) on finite MDPs and
//! POMDPs, and numerically checks the identities that connect them.
//!
//! - [`math`]: categorical distributions, entropy, KL divergence, Gibbs reweighting.
//! - [`models`]: MDP/POMDP tuples, utilities, lotteries, preferences, policies.
//! - [`agents`]: single-step objectives, exact belief updates, action selection
//!   and finite-horizon policy evaluation.
//! - [`bridge`]: identity verifiers and exhibit reproductions.
//! - [`envs`]: the paraglider MDP, the T-maze POMDPs, St. Petersburg lotteries
//!   and seeded random instances.
//!
//! Everything is `no_std` (with `alloc`). File formats and the command line
//! live in the `agency-bridge` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod agents;
pub mod bridge;
pub mod envs;
pub mod math;
pub mod models;

mod error;

pub use error::{Error, Result};
pub use math::{CategoricalDist, Nats};
