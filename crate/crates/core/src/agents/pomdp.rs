use alloc::vec;
use alloc::vec::Vec;

use libm::log;

use super::mdp::{check_beta, check_pref};
use crate::error::check_len;
use crate::math::{entropy, expectation, gibbs, kl_divergence, xlogx, CategoricalDist, Nats};
use crate::models::{BeliefState, PomdpModel, PreferenceDistribution, Support, UtilityFunction};
use crate::{Error, Result};

/// Position of `(observation, state)` in a flattened joint distribution.
#[inline]
pub fn joint_index(n_states: usize, observation: usize, state: usize) -> usize {
    observation * n_states + state
}

/// `Σ_s belief(s)·P(s'|a,s)`.
pub fn predicted_state_prior(p: &PomdpModel, belief: &BeliefState, a: usize) -> Result<BeliefState> {
    check_len(p.n_states(), belief.len())?;
    p.check_action(a)?;
    let n = p.n_states();
    let mut next = vec![0.0; n];
    for s in belief.dist().support() {
        let w = belief.dist().get(s);
        for (acc, &t) in next.iter_mut().zip(p.transition(a, s).probs()) {
            *acc += w * t;
        }
    }
    Ok(BeliefState::new(CategoricalDist::from_weights(next)?))
}

/// Unnormalized `P(o) = Σ_s predicted(s)·P(o|s)`, in observation order.
fn observation_weights(p: &PomdpModel, predicted: &BeliefState) -> Vec<f64> {
    let mut w = vec![0.0; p.n_observations()];
    for s in predicted.dist().support() {
        let ps = predicted.dist().get(s);
        for (acc, &l) in w.iter_mut().zip(p.likelihood(s).probs()) {
            *acc += ps * l;
        }
    }
    w
}

/// Predicted observation distribution `Q(o|a)` for a predicted state belief.
pub fn observation_marginal(p: &PomdpModel, predicted: &BeliefState) -> Result<CategoricalDist> {
    check_len(p.n_states(), predicted.len())?;
    CategoricalDist::from_weights(observation_weights(p, predicted))
}

/// Bayes rule: `P(o|s)·predicted(s) / Σ_s P(o|s)·predicted(s)`.
pub fn exact_posterior(p: &PomdpModel, predicted: &BeliefState, o: usize) -> Result<BeliefState> {
    check_len(p.n_states(), predicted.len())?;
    p.check_observation(o)?;
    let weights: Vec<f64> = (0..p.n_states()).map(|s| p.likelihood(s).get(o) * predicted.dist().get(s)).collect();
    let evidence: f64 = weights.iter().sum();
    if !(evidence > 0.0) {
        return Err(Error::ZeroEvidence { observation: o });
    }
    Ok(BeliefState::new(CategoricalDist::from_weights(weights)?))
}

/// One observation outcome after acting: its probability and the updated belief.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationBranch {
    pub observation: usize,
    pub probability: f64,
    pub posterior: BeliefState,
}

/// Expands every observation with positive probability after taking `a`
/// under `belief`. Zero-probability observations are dropped.
pub fn observation_branches(p: &PomdpModel, belief: &BeliefState, a: usize) -> Result<Vec<ObservationBranch>> {
    let predicted = predicted_state_prior(p, belief, a)?;
    let weights = observation_weights(p, &predicted);
    let mut out = Vec::new();
    for (o, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            out.push(ObservationBranch {
                observation: o,
                probability: w,
                posterior: exact_posterior(p, &predicted, o)?,
            });
        }
    }
    Ok(out)
}

/// `P(o,s|a) = P(o|s)·predicted(s)`, flattened with [`joint_index`].
pub fn prior_joint(p: &PomdpModel, predicted: &BeliefState) -> Result<CategoricalDist> {
    check_len(p.n_states(), predicted.len())?;
    let n = p.n_states();
    let mut joint = vec![0.0; n * p.n_observations()];
    for s in 0..n {
        let ps = predicted.dist().get(s);
        for (o, &l) in p.likelihood(s).probs().iter().enumerate() {
            joint[joint_index(n, o, s)] = l * ps;
        }
    }
    CategoricalDist::from_weights(joint)
}

/// `u(R(s))` for every `(o, s)` entry of the joint.
pub fn joint_utilities(p: &PomdpModel, u: &UtilityFunction) -> Result<Vec<f64>> {
    let per_state = u.apply_all(p.reward())?;
    let n = p.n_states();
    let mut out = vec![0.0; n * p.n_observations()];
    for o in 0..p.n_observations() {
        out[joint_index(n, o, 0)..joint_index(n, o, 0) + n].copy_from_slice(&per_state);
    }
    Ok(out)
}

/// Every term of both POMDP expected-free-energy forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfePomdpTerms {
    /// `E_{Q(s|a)} H[P(o|s)]`
    pub ambiguity: f64,
    /// `D_KL[Q(s|a) ‖ P(s|C)]`
    pub risk: f64,
    /// `E_{Q(o|a)} D_KL[Q(s|o) ‖ Q(s|a)]`
    pub intrinsic: f64,
    /// `E_{Q(o,s|a)} ln P(o|C)`
    pub extrinsic: f64,
}

impl EfePomdpTerms {
    pub fn risk_ambiguity(&self) -> f64 {
        self.ambiguity + self.risk
    }

    pub fn value(&self) -> f64 {
        -self.intrinsic - self.extrinsic
    }
}

/// Which form of the POMDP expected free energy to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum EfePomdpForm<'a> {
    RiskAmbiguity { pref_states: &'a PreferenceDistribution },
    Value { pref_obs: &'a PreferenceDistribution },
}

fn ambiguity(p: &PomdpModel, predicted: &BeliefState) -> f64 {
    predicted.dist().support().map(|s| predicted.dist().get(s) * entropy(p.likelihood(s)).value()).sum()
}

fn intrinsic_value(p: &PomdpModel, predicted: &BeliefState, weights: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (o, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            let post = exact_posterior(p, predicted, o)?;
            acc += w * kl_divergence(post.dist(), predicted.dist())?.value();
        }
    }
    Ok(acc)
}

fn expected_log_pref(weights: &[f64], pref_obs: &PreferenceDistribution) -> Result<f64> {
    let mut acc = 0.0;
    for (o, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            let q = pref_obs.dist.get(o);
            if q <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation { index: o });
            }
            acc += w * log(q);
        }
    }
    Ok(acc)
}

/// Single-step expected free energy for a POMDP in the requested form.
pub fn efe_pomdp(p: &PomdpModel, belief: &BeliefState, a: usize, form: EfePomdpForm<'_>) -> Result<Nats> {
    let predicted = predicted_state_prior(p, belief, a)?;
    match form {
        EfePomdpForm::RiskAmbiguity { pref_states } => {
            check_pref(pref_states, Support::States, p.n_states())?;
            let risk = kl_divergence(predicted.dist(), &pref_states.dist)?.value();
            Ok(Nats(ambiguity(p, &predicted) + risk))
        }
        EfePomdpForm::Value { pref_obs } => {
            check_pref(pref_obs, Support::Observations, p.n_observations())?;
            let weights = observation_weights(p, &predicted);
            let intrinsic = intrinsic_value(p, &predicted, &weights)?;
            Ok(Nats(-intrinsic - expected_log_pref(&weights, pref_obs)?))
        }
    }
}

/// All four terms, so the two forms can be compared.
pub fn efe_pomdp_terms(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    pref_states: &PreferenceDistribution,
    pref_obs: &PreferenceDistribution,
) -> Result<EfePomdpTerms> {
    check_pref(pref_states, Support::States, p.n_states())?;
    check_pref(pref_obs, Support::Observations, p.n_observations())?;
    let predicted = predicted_state_prior(p, belief, a)?;
    let weights = observation_weights(p, &predicted);
    Ok(EfePomdpTerms {
        ambiguity: ambiguity(p, &predicted),
        risk: kl_divergence(predicted.dist(), &pref_states.dist)?.value(),
        intrinsic: intrinsic_value(p, &predicted, &weights)?,
        extrinsic: expected_log_pref(&weights, pref_obs)?,
    })
}

/// Free energy of the expected future, evaluated both as a joint divergence
/// and through its extrinsic/intrinsic decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeefTerms {
    /// `D_KL[Q(o,s|a) ‖ P*(o)·Q(s|o)]`
    pub joint_kl: f64,
    /// `E_{Q(s|a)} D_KL[P(o|s) ‖ P*(o)]`
    pub extrinsic: f64,
    /// `E_{Q(o|a)} D_KL[Q(s|o) ‖ Q(s|a)]`
    pub intrinsic: f64,
    /// `E_{Q(s|a)} H[P(o|s)]`
    pub expected_conditional_entropy: f64,
}

impl FeefTerms {
    pub fn decomposed(&self) -> f64 {
        self.extrinsic - self.intrinsic
    }
}

pub fn feef_terms(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    pref_obs: &PreferenceDistribution,
) -> Result<FeefTerms> {
    check_pref(pref_obs, Support::Observations, p.n_observations())?;
    let predicted = predicted_state_prior(p, belief, a)?;
    let weights = observation_weights(p, &predicted);
    let n = p.n_states();

    // Q(o,s) and P*(o,s) = P*(o)·Q(s|o); zero-evidence rows borrow Q(s|a),
    // which carries no weight because Q(o,s) = 0 there.
    let mut joint_kl = 0.0;
    for (o, &w) in weights.iter().enumerate() {
        if !(w > 0.0) {
            continue;
        }
        let post = exact_posterior(p, &predicted, o)?;
        let pref_o = pref_obs.dist.get(o);
        for s in 0..n {
            let q = p.likelihood(s).get(o) * predicted.dist().get(s);
            if q > 0.0 {
                let target = pref_o * post.dist().get(s);
                if !(target > 0.0) {
                    return Err(Error::AbsoluteContinuityViolation { index: joint_index(n, o, s) });
                }
                joint_kl += xlogx(q) - q * log(target);
            }
        }
    }

    let mut extrinsic = 0.0;
    for s in predicted.dist().support() {
        extrinsic += predicted.dist().get(s) * kl_divergence(p.likelihood(s), &pref_obs.dist)?.value();
    }
    Ok(FeefTerms {
        joint_kl,
        extrinsic,
        intrinsic: intrinsic_value(p, &predicted, &weights)?,
        expected_conditional_entropy: ambiguity(p, &predicted),
    })
}

/// `D_KL[Q(o,s|a) ‖ P*(o,s)]` with `P*(o,s) = P*(o)·Q(s|o)`.
pub fn feef(p: &PomdpModel, belief: &BeliefState, a: usize, pref_obs: &PreferenceDistribution) -> Result<Nats> {
    feef_terms(p, belief, a, pref_obs).map(|t| Nats(t.joint_kl))
}

/// `E_q[u(R(s))] − (1/β)·D_KL[q ‖ P(o,s|a)]` over the flattened joint.
pub fn itbr_free_energy_pomdp(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    q_joint: &CategoricalDist,
    u: &UtilityFunction,
    beta: f64,
) -> Result<f64> {
    check_beta(beta)?;
    let predicted = predicted_state_prior(p, belief, a)?;
    let prior = prior_joint(p, &predicted)?;
    check_len(prior.len(), q_joint.len())?;
    let utilities = joint_utilities(p, u)?;
    Ok(expectation(q_joint, &utilities)? - kl_divergence(q_joint, &prior)?.value() / beta)
}

/// Gibbs reweighting of the prior joint by `β·u(R(s))`.
pub fn itbr_optimal_joint(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    u: &UtilityFunction,
    beta: f64,
) -> Result<CategoricalDist> {
    check_beta(beta)?;
    let predicted = predicted_state_prior(p, belief, a)?;
    gibbs(&prior_joint(p, &predicted)?, &joint_utilities(p, u)?, beta)
}

pub fn itbr_optimal_value_pomdp(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    u: &UtilityFunction,
    beta: f64,
) -> Result<f64> {
    let q = itbr_optimal_joint(p, belief, a, u, beta)?;
    itbr_free_energy_pomdp(p, belief, a, &q, u, beta)
}
