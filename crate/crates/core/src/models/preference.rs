use libm::log;
use serde::{Deserialize, Serialize};

use super::{MdpModel, UtilityFunction};
use crate::math::{gibbs_with_log_partition, CategoricalDist};
use crate::Result;

/// What a preference distribution ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    States,
    Observations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Explicit,
    /// Gibbs reweighting of a prior by `β·u(·)`. `utility` is `None` when the
    /// values were supplied directly rather than derived from rewards.
    Gibbs {
        beta: f64,
        utility: Option<UtilityFunction>,
    },
}

/// A target distribution over states or observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceDistribution {
    pub over: Support,
    pub dist: CategoricalDist,
    pub provenance: Provenance,
    /// `ln Z_β` of the Gibbs construction; 0 for explicit preferences.
    pub log_partition: f64,
}

impl PreferenceDistribution {
    pub fn explicit(over: Support, dist: CategoricalDist) -> Self {
        Self { over, dist, provenance: Provenance::Explicit, log_partition: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// `ln Σₛ e^{β·u(s)}`, the softmax denominator.
    ///
    /// Under a uniform prior, `ln pref(s) = β·u(s) − log_softmax_denominator()`,
    /// so subtracting it from a divergence gives the objective computed with the
    /// unnormalized numerator `e^{β·u(s)}` instead of the preference itself.
    pub fn log_softmax_denominator(&self) -> f64 {
        match self.provenance {
            Provenance::Explicit => 0.0,
            Provenance::Gibbs { .. } => self.log_partition + log(self.dist.len() as f64),
        }
    }
}

/// `gibbs(prior, u(R), β)` over the model's states.
pub fn preference_from_rewards(
    m: &MdpModel,
    u: &UtilityFunction,
    beta: f64,
    prior: &CategoricalDist,
) -> Result<PreferenceDistribution> {
    let values = u.apply_all(m.reward())?;
    let g = gibbs_with_log_partition(prior, &values, beta)?;
    Ok(PreferenceDistribution {
        over: Support::States,
        dist: g.dist,
        provenance: Provenance::Gibbs { beta, utility: Some(*u) },
        log_partition: g.log_partition,
    })
}

/// `gibbs(prior, values, β)` over an arbitrary support.
pub fn preference_from_values(
    over: Support,
    values: &[f64],
    beta: f64,
    prior: &CategoricalDist,
) -> Result<PreferenceDistribution> {
    let g = gibbs_with_log_partition(prior, values, beta)?;
    Ok(PreferenceDistribution {
        over,
        dist: g.dist,
        provenance: Provenance::Gibbs { beta, utility: None },
        log_partition: g.log_partition,
    })
}

#[cfg(test)]
mod tests {
    use alloc::vec::Vec;

    use proptest::prelude::*;

    use super::*;
    use crate::envs::build_paraglider;

    fn uniform3() -> CategoricalDist {
        CategoricalDist::uniform(3).unwrap()
    }

    #[test]
    fn paraglider_softmax() {
        let m = build_paraglider();
        let p = preference_from_rewards(&m, &UtilityFunction::Linear, 1.0, &uniform3()).unwrap();
        // softmax{1, 1.5, 0}, mpmath
        let expected = [0.331_498_960_424_091_5, 0.546_549_387_266_179_6, 0.121_951_652_309_728_86];
        for (a, b) in p.dist.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((p.log_softmax_denominator() - 2.104_130_605_336_728_3).abs() < 1e-14);
    }

    #[test]
    fn beta_zero_is_uniform() {
        let m = build_paraglider();
        let p = preference_from_rewards(&m, &UtilityFunction::power(3.0).unwrap(), 0.0, &uniform3()).unwrap();
        assert!(p.dist.max_abs_diff(&uniform3()) < 1e-15);
    }

    #[test]
    fn shifted_utility_gives_same_distribution() {
        let m = build_paraglider();
        let lin = preference_from_rewards(&m, &UtilityFunction::Linear, 1.0, &uniform3()).unwrap();
        let aff = preference_from_rewards(&m, &UtilityFunction::affine(1.0, 5.0).unwrap(), 1.0, &uniform3()).unwrap();
        assert!(lin.dist.max_abs_diff(&aff.dist) < 1e-15);
    }

    fn argmax_set(d: &CategoricalDist) -> Vec<usize> {
        let m = d.probs().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (0..d.len()).filter(|&i| d.get(i) >= m - 1e-12).collect()
    }

    proptest! {
        #[test]
        fn reward_shift_and_affine_argmax(
            rewards in prop::collection::vec(0.0f64..5.0, 2..6),
            shift in 0.0f64..10.0, a in 0.1f64..5.0, b in -5.0f64..5.0, beta in 0.1f64..3.0,
        ) {
            let n = rewards.len();
            let mk = |r: Vec<f64>| {
                let t = (0..n).map(|_| CategoricalDist::uniform(n).unwrap().into_vec()).collect();
                MdpModel::new(
                    (0..n).map(|i| alloc::format!("s{i}")).collect(),
                    alloc::vec!["a".into()],
                    alloc::vec![t],
                    r,
                    1,
                ).unwrap()
            };
            let prior = CategoricalDist::uniform(n).unwrap();
            let base = preference_from_rewards(&mk(rewards.clone()), &UtilityFunction::Linear, beta, &prior).unwrap();
            let shifted = preference_from_rewards(
                &mk(rewards.iter().map(|r| r + shift).collect()), &UtilityFunction::Linear, beta, &prior,
            ).unwrap();
            prop_assert!(base.dist.max_abs_diff(&shifted.dist) < 1e-12);
            let affine = preference_from_rewards(
                &mk(rewards.clone()), &UtilityFunction::affine(a, b).unwrap(), beta, &prior,
            ).unwrap();
            prop_assert_eq!(argmax_set(&base.dist), argmax_set(&affine.dist));
        }
    }
}
