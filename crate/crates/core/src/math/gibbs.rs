use alloc::format;
use alloc::vec::Vec;

use libm::{exp, log};

use super::CategoricalDist;
use crate::error::check_len;
use crate::{Error, Result};

/// A Gibbs reweighting together with its log partition function.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsDist {
    pub dist: CategoricalDist,
    /// `ln Z_β = ln Σᵢ priorᵢ e^{β·potentialᵢ}`.
    pub log_partition: f64,
}

/// `priorᵢ e^{β·potentialᵢ} / Z_β`.
pub fn gibbs(prior: &CategoricalDist, potentials: &[f64], beta: f64) -> Result<CategoricalDist> {
    gibbs_with_log_partition(prior, potentials, beta).map(|g| g.dist)
}

/// Log-sum-exp stabilized Gibbs reweighting. Entries with zero prior mass stay
/// at zero regardless of their potential.
pub fn gibbs_with_log_partition(prior: &CategoricalDist, potentials: &[f64], beta: f64) -> Result<GibbsDist> {
    check_len(prior.len(), potentials.len())?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
    }
    let mut log_weights: Vec<f64> = Vec::with_capacity(prior.len());
    let mut max = f64::NEG_INFINITY;
    for (&p, &u) in prior.probs().iter().zip(potentials) {
        let lw = if p > 0.0 {
            let scaled = if beta == 0.0 { 0.0 } else { beta * u };
            if !scaled.is_finite() {
                return Err(Error::DegenerateNormalizer);
            }
            log(p) + scaled
        } else {
            f64::NEG_INFINITY
        };
        max = max.max(lw);
        log_weights.push(lw);
    }
    if !max.is_finite() {
        return Err(Error::DegenerateNormalizer);
    }
    let weights: Vec<f64> = log_weights.iter().map(|&lw| exp(lw - max)).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateNormalizer);
    }
    let log_partition = max + log(total);
    let dist = CategoricalDist::from_weights(weights)?;
    Ok(GibbsDist { dist, log_partition })
}

/// `softmax(values)`, i.e. Gibbs with a uniform prior and `β = 1`.
pub fn softmax(values: &[f64]) -> Result<CategoricalDist> {
    gibbs(&CategoricalDist::uniform(values.len())?, values, 1.0)
}
