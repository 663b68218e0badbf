use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::objective::ObjectiveSpec;
use super::pomdp::observation_branches;
use super::select::{objective_value_mdp, objective_value_pomdp};
use crate::error::check_len;
use crate::models::{BeliefState, MdpModel, Policy, PolicyStep, PomdpModel, UtilityFunction};
use crate::{Error, Result};

fn check_policy(policy: &Policy, horizon: usize, n_actions: usize) -> Result<()> {
    if policy.len() > horizon {
        return Err(Error::PolicyTooLong { len: policy.len(), horizon });
    }
    for a in policy.actions() {
        crate::error::check_index("action", a, n_actions)?;
    }
    Ok(())
}

/// Evaluates `policy` from state `init`.
///
/// Utility objectives (`RewardMax`, `ExpectedUtility`) score each trajectory by
/// the utility of its cumulative reward (undiscounted) and take the
/// expectation. Every other objective is summed per step along all branches,
/// weighted by branch probability. Reactive steps see the current state.
pub fn evaluate_policy_mdp(m: &MdpModel, init: usize, policy: &Policy, spec: &ObjectiveSpec) -> Result<f64> {
    evaluate_policy_mdp_with_payoff(m, init, policy, spec, m.reward())
}

/// As [`evaluate_policy_mdp`], accumulating `payoff` instead of the model reward.
pub fn evaluate_policy_mdp_with_payoff(
    m: &MdpModel,
    init: usize,
    policy: &Policy,
    spec: &ObjectiveSpec,
    payoff: &[f64],
) -> Result<f64> {
    m.check_state(init)?;
    check_len(m.n_states(), payoff.len())?;
    check_policy(policy, m.horizon(), m.n_actions())?;
    spec.check()?;
    MdpWalk { m, policy, spec, payoff, utility: spec.utility() }.node(0, init, 0.0)
}

struct MdpWalk<'a> {
    m: &'a MdpModel,
    policy: &'a Policy,
    spec: &'a ObjectiveSpec,
    payoff: &'a [f64],
    utility: Option<UtilityFunction>,
}

impl MdpWalk<'_> {
    fn node(&self, step: usize, s: usize, cumulative: f64) -> Result<f64> {
        if step == self.policy.len() {
            return match (self.spec.is_terminal_utility(), self.utility) {
                (true, Some(u)) => u.apply(cumulative),
                _ => Ok(0.0),
            };
        }
        let a = self.policy.action(step, Some(s))?;
        let mut value =
            if self.spec.is_terminal_utility() { 0.0 } else { objective_value_mdp(self.m, s, a, self.spec)? };
        let next = self.m.transition(a, s);
        for s2 in next.support() {
            value += next.get(s2) * self.node(step + 1, s2, cumulative + self.payoff[s2])?;
        }
        Ok(value)
    }
}

/// Evaluates `policy` from `belief` by exact belief-tree rollout.
///
/// Per-step objectives are evaluated at every node against the current exact
/// posterior and weighted by the probability of the observation history.
/// Utility objectives enumerate latent trajectories and score the utility of
/// the cumulative reward. Reactive steps see the most recent observation; a
/// reactive first step is an error because nothing has been observed yet.
pub fn evaluate_policy_pomdp(
    p: &PomdpModel,
    belief: &BeliefState,
    policy: &Policy,
    spec: &ObjectiveSpec,
) -> Result<f64> {
    evaluate_policy_pomdp_with_payoff(p, belief, policy, spec, p.reward())
}

pub fn evaluate_policy_pomdp_with_payoff(
    p: &PomdpModel,
    belief: &BeliefState,
    policy: &Policy,
    spec: &ObjectiveSpec,
    payoff: &[f64],
) -> Result<f64> {
    check_len(p.n_states(), belief.len())?;
    check_len(p.n_states(), payoff.len())?;
    check_policy(policy, p.horizon(), p.n_actions())?;
    spec.check()?;
    let walk = PomdpWalk { p, policy, spec, payoff };
    if spec.is_terminal_utility() {
        let u = spec.utility().expect("utility objective");
        let mut value = 0.0;
        for s in belief.dist().support() {
            value += belief.dist().get(s) * walk.latent(0, s, 0.0, None, &u)?;
        }
        Ok(value)
    } else {
        walk.belief(0, belief, None)
    }
}

struct PomdpWalk<'a> {
    p: &'a PomdpModel,
    policy: &'a Policy,
    spec: &'a ObjectiveSpec,
    payoff: &'a [f64],
}

impl PomdpWalk<'_> {
    fn latent(&self, step: usize, s: usize, cumulative: f64, last: Option<usize>, u: &UtilityFunction) -> Result<f64> {
        if step == self.policy.len() {
            return u.apply(cumulative);
        }
        let a = self.policy.action(step, last)?;
        let next = self.p.transition(a, s);
        let mut value = 0.0;
        for s2 in next.support() {
            let lik = self.p.likelihood(s2);
            for o in lik.support() {
                value +=
                    next.get(s2) * lik.get(o) * self.latent(step + 1, s2, cumulative + self.payoff[s2], Some(o), u)?;
            }
        }
        Ok(value)
    }

    fn belief(&self, step: usize, belief: &BeliefState, last: Option<usize>) -> Result<f64> {
        if step == self.policy.len() {
            return Ok(0.0);
        }
        let a = self.policy.action(step, last)?;
        let mut value = objective_value_pomdp(self.p, belief, a, self.spec)?;
        if step + 1 < self.policy.len() {
            for b in observation_branches(self.p, belief, a)? {
                value += b.probability * self.belief(step + 1, &b.posterior, Some(b.observation))?;
            }
        }
        Ok(value)
    }
}

/// Observations (for MDPs: states) that can precede step `prefix.len()`.
fn reachable_mdp(m: &MdpModel, init: usize, prefix: &Policy) -> Result<BTreeSet<usize>> {
    let mut frontier = BTreeSet::from([init]);
    for step in 0..prefix.len() {
        let mut next = BTreeSet::new();
        for &s in &frontier {
            let a = prefix.action(step, Some(s))?;
            next.extend(m.transition(a, s).support());
        }
        frontier = next;
    }
    Ok(frontier)
}

fn reachable_pomdp(p: &PomdpModel, belief: &BeliefState, prefix: &Policy) -> Result<BTreeSet<usize>> {
    let mut frontier: Vec<(BeliefState, Option<usize>)> = Vec::from([(belief.clone(), None)]);
    for step in 0..prefix.len() {
        let mut next = Vec::new();
        for (b, last) in &frontier {
            let a = prefix.action(step, *last)?;
            for branch in observation_branches(p, b, a)? {
                next.push((branch.posterior, Some(branch.observation)));
            }
        }
        frontier = next;
    }
    Ok(frontier.into_iter().filter_map(|(_, o)| o).collect())
}

fn extend_all(
    prefixes: Vec<Policy>,
    n_actions: usize,
    reach: impl Fn(&Policy) -> Result<BTreeSet<usize>>,
) -> Result<Vec<Policy>> {
    let mut out = Vec::new();
    for prefix in prefixes {
        let keys: Vec<usize> = reach(&prefix)?.into_iter().collect();
        let combos = n_actions.pow(keys.len() as u32);
        for mut code in 0..combos {
            let mut map = BTreeMap::new();
            for &k in &keys {
                map.insert(k, code % n_actions);
                code /= n_actions;
            }
            out.push(prefix.clone().then(PolicyStep::Reactive(map)));
        }
    }
    Ok(out)
}

/// Every reactive policy of length `len`: a fixed first action, then one
/// action per reachable state at each later step. Grows as
/// `|A|^(reachable states)` per step.
pub fn enumerate_policies_mdp(m: &MdpModel, init: usize, len: usize) -> Result<Vec<Policy>> {
    m.check_state(init)?;
    if len == 0 {
        return Ok(Vec::from([Policy::default()]));
    }
    let mut policies: Vec<Policy> = (0..m.n_actions()).map(|a| Policy::open_loop(&[a])).collect();
    for _ in 1..len {
        policies = extend_all(policies, m.n_actions(), |pre| reachable_mdp(m, init, pre))?;
    }
    Ok(policies)
}

/// Every reactive policy of length `len`: a fixed first action, then one
/// action per observation reachable at each later step.
pub fn enumerate_policies_pomdp(p: &PomdpModel, belief: &BeliefState, len: usize) -> Result<Vec<Policy>> {
    check_len(p.n_states(), belief.len())?;
    if len == 0 {
        return Ok(Vec::from([Policy::default()]));
    }
    let mut policies: Vec<Policy> = (0..p.n_actions()).map(|a| Policy::open_loop(&[a])).collect();
    for _ in 1..len {
        policies = extend_all(policies, p.n_actions(), |pre| reachable_pomdp(p, belief, pre))?;
    }
    Ok(policies)
}
