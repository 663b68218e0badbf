use alloc::format;
use alloc::vec::Vec;

use libm::log;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::models::{MdpModel, Model, ModelKind, PomdpModel};
use crate::{Error, Result};

/// Minimum entry of every generated probability row.
pub const POSITIVITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: ModelKind,
    pub n_states: usize,
    pub n_actions: usize,
    /// Ignored for MDPs.
    pub n_obs: usize,
    pub seed: u64,
    pub reward_range: (f64, f64),
}

impl InstanceSpec {
    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.reward_range;
        if self.n_states == 0 || self.n_actions == 0 || (self.kind == ModelKind::Pomdp && self.n_obs == 0) {
            return Err(Error::InvalidParameter("dimensions must be positive".into()));
        }
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad reward range ({lo}, {hi})")));
        }
        Ok(())
    }
}

/// Flat-simplex draw (normalized exponentials), mixed with a uniform floor so
/// every entry is at least `floor`.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize, floor: f64) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -log(1.0 - rng.gen::<f64>())).collect();
    let total: f64 = draws.iter().sum();
    let free = 1.0 - n as f64 * floor;
    draws.iter().map(|&d| if total > 0.0 { floor + free * d / total } else { 1.0 / n as f64 }).collect()
}

/// Deterministic random MDP or POMDP for the given seed.
pub fn random_instance(spec: &InstanceSpec) -> Result<Model> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_states;
    let transition: Vec<Vec<Vec<f64>>> =
        (0..spec.n_actions).map(|_| (0..n).map(|_| random_simplex(&mut rng, n, POSITIVITY_FLOOR)).collect()).collect();
    let (lo, hi) = spec.reward_range;
    let reward: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect();
    let base = MdpModel::new(
        (0..n).map(|i| format!("s{i}")).collect(),
        (0..spec.n_actions).map(|i| format!("a{i}")).collect(),
        transition,
        reward,
        1,
    )?;
    match spec.kind {
        ModelKind::Mdp => Ok(Model::Mdp(base)),
        ModelKind::Pomdp => {
            let likelihood = (0..n).map(|_| random_simplex(&mut rng, spec.n_obs, POSITIVITY_FLOOR)).collect();
            let obs = (0..spec.n_obs).map(|i| format!("o{i}")).collect();
            PomdpModel::new(base, obs, likelihood).map(Model::Pomdp)
        }
    }
}

#[cfg(test)]
mod tests {
    use alloc::collections::BTreeSet;

    use super::*;
    use crate::models::validate_model;

    fn spec(kind: ModelKind, seed: u64) -> InstanceSpec {
        InstanceSpec { kind, n_states: 4, n_actions: 3, n_obs: 3, seed, reward_range: (0.0, 2.0) }
    }

    #[test]
    fn deterministic_in_seed() {
        for kind in [ModelKind::Mdp, ModelKind::Pomdp] {
            assert_eq!(random_instance(&spec(kind, 7)).unwrap(), random_instance(&spec(kind, 7)).unwrap());
        }
    }

    #[test]
    fn rows_valid_and_floored() {
        for seed in 0..50 {
            let m = random_instance(&spec(ModelKind::Pomdp, seed)).unwrap();
            let desc = m.to_description();
            assert!(validate_model(&desc).is_valid());
            let min_t = desc.transition.iter().flatten().flatten().cloned().fold(1.0, f64::min);
            let min_l = desc.likelihood.unwrap().iter().flatten().cloned().fold(1.0, f64::min);
            assert!(min_t >= POSITIVITY_FLOOR && min_l >= POSITIVITY_FLOOR, "{min_t} {min_l}");
            assert!(desc.reward.iter().all(|r| (0.0..=2.0).contains(r)));
        }
    }

    #[test]
    fn seeds_give_distinct_tensors() {
        let tensors: BTreeSet<Vec<u64>> = (1..=100)
            .map(|seed| {
                let d = random_instance(&spec(ModelKind::Mdp, seed)).unwrap().to_description();
                d.transition.iter().flatten().flatten().map(|x| x.to_bits()).collect()
            })
            .collect();
        assert_eq!(tensors.len(), 100);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec(ModelKind::Mdp, 1);
        s.reward_range = (2.0, 1.0);
        assert!(random_instance(&s).is_err());
        s.reward_range = (-1.0, 1.0);
        assert!(random_instance(&s).is_err());
    }
}
