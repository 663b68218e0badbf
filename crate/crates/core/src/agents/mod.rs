//! Objective evaluators, exact Bayesian belief updates, action selection and
//! finite-horizon policy evaluation.
//!
//! Joint distributions over `(observation, state)` pairs are flattened with
//! [`joint_index`]: entry `o * n_states + s`.

mod budget;
mod mdp;
mod objective;
mod policy_eval;
mod pomdp;
mod select;

pub use budget::{kl_budget_to_beta, BetaForBudget};
pub use mdp::{
    divergence_objective_mdp, efe_mdp, efe_mdp_unnormalized, expected_utility, itbr_free_energy, itbr_free_energy_mdp,
    itbr_optimal_posterior, itbr_optimal_value_mdp, EfeForm,
};
pub use objective::{ActionEvaluation, ObjectiveSpec, Sense, DEFAULT_TIE_TOLERANCE};
pub use policy_eval::{
    enumerate_policies_mdp, enumerate_policies_pomdp, evaluate_policy_mdp, evaluate_policy_mdp_with_payoff,
    evaluate_policy_pomdp, evaluate_policy_pomdp_with_payoff,
};
pub use pomdp::{
    efe_pomdp, efe_pomdp_terms, exact_posterior, feef, feef_terms, itbr_free_energy_pomdp, itbr_optimal_joint,
    itbr_optimal_value_pomdp, joint_index, joint_utilities, observation_branches, observation_marginal,
    predicted_state_prior, prior_joint, EfePomdpForm, EfePomdpTerms, FeefTerms, ObservationBranch,
};
pub use select::{objective_value_mdp, objective_value_pomdp, select_action_mdp, select_action_pomdp};
