use alloc::format;

use serde::{Deserialize, Serialize};

use crate::math::{entropy, expectation, gibbs, gibbs_with_log_partition, kl_divergence, CategoricalDist, Nats};
use crate::models::{MdpModel, PreferenceDistribution, Support, UtilityFunction};
use crate::{Error, Result};

/// Which algebraic form of the MDP expected free energy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfeForm {
    /// `D_KL[P(s'|a,s) ‖ P(s|C)]`
    Kl,
    /// `−H[P(s'|a,s)] − E[ln P(s|C)]`
    EntropySurprise,
}

pub(crate) fn check_pref(pref: &PreferenceDistribution, over: Support, n: usize) -> Result<()> {
    if pref.over != over {
        return Err(Error::InvalidParameter(format!("preference is over {:?}, expected {:?}", pref.over, over)));
    }
    crate::error::check_len(n, pref.len())
}

fn row(m: &MdpModel, s_now: usize, a: usize) -> Result<&CategoricalDist> {
    m.check_state(s_now)?;
    m.check_action(a)?;
    Ok(m.transition(a, s_now))
}

/// `E_{P(s'|a,s_now)} u(R(s'))`.
pub fn expected_utility(m: &MdpModel, s_now: usize, a: usize, u: &UtilityFunction) -> Result<f64> {
    let next = row(m, s_now, a)?;
    let mut acc = 0.0;
    for s in next.support() {
        acc += next.get(s) * u.apply(m.reward()[s])?;
    }
    Ok(acc)
}

/// Single-step expected free energy of action `a` from `s_now`.
pub fn efe_mdp(m: &MdpModel, s_now: usize, a: usize, pref: &PreferenceDistribution, form: EfeForm) -> Result<Nats> {
    let next = row(m, s_now, a)?;
    check_pref(pref, Support::States, m.n_states())?;
    match form {
        EfeForm::Kl => kl_divergence(next, &pref.dist),
        EfeForm::EntropySurprise => {
            let mut surprise = 0.0;
            for s in next.support() {
                let q = pref.dist.get(s);
                if q <= 0.0 {
                    return Err(Error::AbsoluteContinuityViolation { index: s });
                }
                surprise -= next.get(s) * libm::log(q);
            }
            Ok(Nats(-entropy(next).value() + surprise))
        }
    }
}

/// Expected free energy with the preference's softmax denominator dropped:
/// `D_KL − ln Σₛ e^{β·u(s)}`. For a linear, `β = 1` preference this is
/// `−E[R(s')] − H[P(s'|a,s)]`.
pub fn efe_mdp_unnormalized(m: &MdpModel, s_now: usize, a: usize, pref: &PreferenceDistribution) -> Result<f64> {
    Ok(efe_mdp(m, s_now, a, pref, EfeForm::Kl)?.value() - pref.log_softmax_denominator())
}

/// `D_KL[P(s'|a,s_now) ‖ P*(s)]`.
pub fn divergence_objective_mdp(
    m: &MdpModel,
    s_now: usize,
    a: usize,
    pref_star: &PreferenceDistribution,
) -> Result<Nats> {
    let next = row(m, s_now, a)?;
    check_pref(pref_star, Support::States, m.n_states())?;
    kl_divergence(next, &pref_star.dist)
}

/// Maximizer of the ITBR free energy: `prior·e^{β·utilities} / Z_β`.
pub fn itbr_optimal_posterior(prior: &CategoricalDist, utilities: &[f64], beta: f64) -> Result<CategoricalDist> {
    gibbs(prior, utilities, beta)
}

/// `E_q[u(R)] − (1/β)·D_KL[q ‖ P(s'|a,s_now)]`.
pub fn itbr_free_energy_mdp(
    m: &MdpModel,
    s_now: usize,
    a: usize,
    q: &CategoricalDist,
    u: &UtilityFunction,
    beta: f64,
) -> Result<f64> {
    let prior = row(m, s_now, a)?;
    crate::error::check_len(m.n_states(), q.len())?;
    let mut utilities = alloc::vec![0.0; q.len()];
    for s in q.support() {
        utilities[s] = u.apply(m.reward()[s])?;
    }
    itbr_free_energy(prior, q, &utilities, beta)
}

/// `E_q[utilities] − (1/β)·D_KL[q ‖ prior]` for an arbitrary prior.
pub fn itbr_free_energy(prior: &CategoricalDist, q: &CategoricalDist, utilities: &[f64], beta: f64) -> Result<f64> {
    check_beta(beta)?;
    crate::error::check_len(prior.len(), utilities.len())?;
    let kl = kl_divergence(q, prior)?.value();
    Ok(expectation(q, utilities)? - kl / beta)
}

/// ITBR free energy at the optimal posterior, which equals `(1/β) ln Z_β(a)`.
pub fn itbr_optimal_value_mdp(m: &MdpModel, s_now: usize, a: usize, u: &UtilityFunction, beta: f64) -> Result<f64> {
    let prior = row(m, s_now, a)?;
    check_beta(beta)?;
    let utilities = u.apply_all(m.reward())?;
    let q = gibbs_with_log_partition(prior, &utilities, beta)?.dist;
    let kl = kl_divergence(&q, prior)?.value();
    Ok(expectation(&q, &utilities)? - kl / beta)
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta must be finite and > 0, got {beta}")))
    }
}
