use serde::{Deserialize, Serialize};

use crate::math::CategoricalDist;
use crate::Result;

/// Exact posterior over latent states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BeliefState(CategoricalDist);

impl BeliefState {
    pub fn new(dist: CategoricalDist) -> Self {
        Self(dist)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        CategoricalDist::uniform(n).map(Self)
    }

    pub fn delta(n: usize, s: usize) -> Result<Self> {
        CategoricalDist::delta(n, s).map(Self)
    }

    pub fn dist(&self) -> &CategoricalDist {
        &self.0
    }

    pub fn into_dist(self) -> CategoricalDist {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<CategoricalDist> for BeliefState {
    fn from(d: CategoricalDist) -> Self {
        Self(d)
    }
}
