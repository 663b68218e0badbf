use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::UtilityFunction;
use crate::error::check_len;
use crate::math::{expectation, CategoricalDist};
use crate::{Error, Result};

/// Gap below which `u(E[L])` and `E[u(L)]` count as equal.
pub const RISK_TOLERANCE: f64 = 1e-12;

/// A finite lottery: outcomes with a categorical distribution over them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lottery {
    outcomes: Vec<f64>,
    dist: CategoricalDist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiskAttitude {
    Averse,
    Neutral,
    Loving,
}

impl Lottery {
    pub fn new(outcomes: Vec<f64>, dist: CategoricalDist) -> Result<Self> {
        check_len(dist.len(), outcomes.len())?;
        Ok(Self { outcomes, dist })
    }

    pub fn certain(x: f64) -> Self {
        Self { outcomes: alloc::vec![x], dist: CategoricalDist::delta(1, 0).expect("n = 1") }
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn dist(&self) -> &CategoricalDist {
        &self.dist
    }

    pub fn expected_value(&self) -> f64 {
        expectation(&self.dist, &self.outcomes).expect("lengths checked")
    }

    pub fn expected_utility(&self, u: &UtilityFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (&p, &x) in self.dist.probs().iter().zip(&self.outcomes) {
            if p > 0.0 {
                acc += p * u.apply(x)?;
            }
        }
        Ok(acc)
    }

    /// True when every outcome carrying mass has the same value.
    pub fn is_degenerate(&self) -> bool {
        let mut support = self.dist.support().map(|i| self.outcomes[i]);
        let first = support.next();
        support.all(|x| Some(x) == first)
    }

    /// Compares `u(E[L])` with `E[u(L)]` for this lottery.
    pub fn risk_attitude(&self, u: &UtilityFunction) -> Result<RiskAttitude> {
        if self.is_degenerate() {
            return Err(Error::DegenerateLottery);
        }
        let of_mean = u.apply(self.expected_value())?;
        let mean_of = self.expected_utility(u)?;
        Ok(if of_mean > mean_of + RISK_TOLERANCE {
            RiskAttitude::Averse
        } else if of_mean < mean_of - RISK_TOLERANCE {
            RiskAttitude::Loving
        } else {
            RiskAttitude::Neutral
        })
    }
}
