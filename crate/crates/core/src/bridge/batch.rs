use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::identities::{
    verify_efe_feef_relation, verify_efe_mdp_forms, verify_feef_decomposition, verify_gibbs_optimality_mdp,
    verify_itbr_divergence_equivalence_mdp,
};
use super::report::{sort_canonical, IdentityReport, Witness};
use crate::envs::{random_instance, random_simplex, InstanceSpec};
use crate::math::CategoricalDist;
use crate::models::{preference_from_values, BeliefState, Model, ModelKind, Support, UtilityFunction};
use crate::Result;

/// Random candidates per action for the Gibbs optimality check.
pub const DEFAULT_CANDIDATES: usize = 10_000;

/// Everything a batch seed expands to: one random MDP, one random POMDP, and
/// the parameters the identities are checked with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchInstance {
    pub seed: u64,
    pub mdp: InstanceSpec,
    pub pomdp: InstanceSpec,
    pub beta: f64,
    pub utility: UtilityFunction,
    /// Initial belief for the POMDP checks.
    pub belief: Vec<f64>,
    /// Values whose Gibbs weighting gives the POMDP observation preference.
    pub observation_values: Vec<f64>,
}

/// Expands a seed into its batch instance. MDPs have 2–4 states and 1–3
/// actions; POMDPs additionally have 2–4 observations. Rewards lie in
/// `[0, 2)`, `β` in `[0.5, 4)`, and the utility alternates between linear
/// (even seeds) and square root (odd seeds).
pub fn batch_instances(seed: u64) -> BatchInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mdp = InstanceSpec {
        kind: ModelKind::Mdp,
        n_states: rng.gen_range(2..=4),
        n_actions: rng.gen_range(1..=3),
        n_obs: 0,
        seed: rng.gen(),
        reward_range: (0.0, 2.0),
    };
    let pomdp = InstanceSpec {
        kind: ModelKind::Pomdp,
        n_states: rng.gen_range(2..=4),
        n_actions: rng.gen_range(1..=3),
        n_obs: rng.gen_range(2..=4),
        seed: rng.gen(),
        reward_range: (0.0, 2.0),
    };
    let beta = rng.gen_range(0.5..4.0);
    let utility = if seed.is_multiple_of(2) { UtilityFunction::Linear } else { UtilityFunction::Power { c: 0.5 } };
    let belief = random_simplex(&mut rng, pomdp.n_states, 0.0);
    let observation_values = (0..pomdp.n_obs).map(|_| 2.0 * rng.gen::<f64>()).collect();
    BatchInstance { seed, mdp, pomdp, beta, utility, belief, observation_values }
}

/// The report with the largest residual (NaN counts as largest).
fn worst(reports: Vec<IdentityReport>) -> IdentityReport {
    reports
        .into_iter()
        .reduce(
            |best, r| {
                if r.residual.is_nan() || (!best.residual.is_nan() && r.residual > best.residual) {
                    r
                } else {
                    best
                }
            },
        )
        .expect("at least one action")
}

fn regenerable(mut report: IdentityReport, spec: InstanceSpec, seed: u64) -> IdentityReport {
    report.witness = Witness { instance: Some(spec), model: None, ..report.witness };
    report.with_seed(seed)
}

/// Runs every identity on the instance of each seed.
///
/// Each seed yields five reports: the two expected-free-energy forms, Gibbs
/// optimality and the bounded-rationality/divergence identity on the MDP, and
/// the free-energy-of-the-expected-future decomposition and its relation to
/// expected free energy on the POMDP. Multi-action checks report the worst
/// action. Output is sorted by identity name, then seed.
pub fn verify_all(seeds: impl IntoIterator<Item = u64>, n_candidates: usize) -> Result<Vec<IdentityReport>> {
    let mut reports = Vec::new();
    for seed in seeds {
        let inst = batch_instances(seed);
        let Model::Mdp(m) = random_instance(&inst.mdp)? else { unreachable!("requested an MDP") };
        let u = inst.utility;
        reports.push(regenerable(verify_efe_mdp_forms(&m, &u, inst.beta)?, inst.mdp, seed));
        reports.push(regenerable(
            verify_gibbs_optimality_mdp(&m, 0, &u, inst.beta, n_candidates, seed)?,
            inst.mdp,
            seed,
        ));
        reports.push(regenerable(verify_itbr_divergence_equivalence_mdp(&m, 0, &u, inst.beta)?, inst.mdp, seed));

        let Model::Pomdp(p) = random_instance(&inst.pomdp)? else { unreachable!("requested a POMDP") };
        let belief = BeliefState::new(CategoricalDist::new(inst.belief.clone())?);
        let n_obs = p.n_observations();
        let pref_obs = preference_from_values(
            Support::Observations,
            &inst.observation_values,
            inst.beta,
            &CategoricalDist::uniform(n_obs)?,
        )?;
        let with_params = |r: IdentityReport| {
            let mut r = regenerable(r, inst.pomdp, seed);
            r.witness =
                r.witness.with_parameter("beta", inst.beta).with_vector("observation_values", &inst.observation_values);
            r
        };
        let decomposition = (0..p.n_actions())
            .map(|a| verify_feef_decomposition(&p, &belief, a, &pref_obs))
            .collect::<Result<Vec<_>>>()?;
        reports.push(with_params(worst(decomposition)));
        let relation = (0..p.n_actions())
            .map(|a| verify_efe_feef_relation(&p, &belief, a, &pref_obs))
            .collect::<Result<Vec<_>>>()?;
        reports.push(with_params(worst(relation)));
    }
    sort_canonical(&mut reports);
    Ok(reports)
}
