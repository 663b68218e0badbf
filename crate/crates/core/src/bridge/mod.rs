//! Numerical certification of the identities linking expected utility,
//! expected free energy and bounded rationality, plus reproductions of the
//! worked exhibits.
//!
//! Every check produces an [`IdentityReport`] whose `pass` flag is exactly
//! `residual <= tolerance`.

mod batch;
mod identities;
mod report;
mod reproduce;

pub use batch::{batch_instances, verify_all, BatchInstance, DEFAULT_CANDIDATES};
pub use identities::{
    compare_preference_distributions, verify_efe_feef_relation, verify_efe_mdp_forms, verify_feef_decomposition,
    verify_gibbs_optimality, verify_gibbs_optimality_mdp, verify_itbr_divergence_equivalence_mdp,
};
pub use report::{default_tolerance, names, sort_canonical, tolerances, IdentityReport, Witness};
pub use reproduce::{
    cue_first_policy, gamble_policy, gamble_then_correct_policy, reproduce_paraglider, reproduce_st_petersburg,
    reproduce_tmaze, tmaze_observation_preference, Reproduction, ValueRow, EXPONENT_GRID, REPRODUCTION_TIE_TOLERANCE,
    ROUNDED_REFERENCE_TOLERANCE, ST_PETERSBURG_DEPTHS,
};
