//! Finite probability and information-theory kernels. All logarithms are natural, so
//! every entropy and divergence is in nats.

mod dist;
mod gibbs;
mod info;

pub use dist::{CategoricalDist, Nats, NORMALIZATION_TOLERANCE};
pub use gibbs::{gibbs, gibbs_with_log_partition, softmax, GibbsDist};
pub use info::{cross_entropy, entropy, expectation, kl_divergence, kl_divergence_or_infinite, xlogx};
