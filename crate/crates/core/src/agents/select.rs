use alloc::vec::Vec;

use super::mdp::{divergence_objective_mdp, efe_mdp, expected_utility, itbr_optimal_value_mdp, EfeForm};
use super::objective::{ActionEvaluation, ObjectiveSpec};
use super::pomdp::{efe_pomdp, feef, itbr_optimal_value_pomdp, predicted_state_prior, EfePomdpForm};
use crate::models::{BeliefState, MdpModel, PomdpModel, UtilityFunction};
use crate::{Error, Result};

/// Value of `spec` for action `a` taken in fully observed state `s_now`.
pub fn objective_value_mdp(m: &MdpModel, s_now: usize, a: usize, spec: &ObjectiveSpec) -> Result<f64> {
    spec.check()?;
    match spec {
        ObjectiveSpec::RewardMax => expected_utility(m, s_now, a, &UtilityFunction::Linear),
        ObjectiveSpec::ExpectedUtility { utility } => expected_utility(m, s_now, a, utility),
        ObjectiveSpec::EfeMdp { pref } => efe_mdp(m, s_now, a, pref, EfeForm::Kl).map(f64::from),
        ObjectiveSpec::ItbrMdp { beta, utility } => itbr_optimal_value_mdp(m, s_now, a, utility, *beta),
        ObjectiveSpec::DivergenceMdp { pref } => divergence_objective_mdp(m, s_now, a, pref).map(f64::from),
        _ => Err(Error::IncompatibleObjective { objective: spec.name(), model: "mdp" }),
    }
}

/// Value of `spec` for action `a` under `belief`.
pub fn objective_value_pomdp(p: &PomdpModel, belief: &BeliefState, a: usize, spec: &ObjectiveSpec) -> Result<f64> {
    spec.check()?;
    match spec {
        ObjectiveSpec::RewardMax | ObjectiveSpec::ExpectedUtility { .. } => {
            let u = spec.utility().expect("utility objective");
            let predicted = predicted_state_prior(p, belief, a)?;
            let mut acc = 0.0;
            for s in predicted.dist().support() {
                acc += predicted.dist().get(s) * u.apply(p.reward()[s])?;
            }
            Ok(acc)
        }
        ObjectiveSpec::EfePomdpRiskAmbiguity { pref_states, .. } => {
            efe_pomdp(p, belief, a, EfePomdpForm::RiskAmbiguity { pref_states }).map(f64::from)
        }
        ObjectiveSpec::EfePomdpValue { pref_obs } => {
            efe_pomdp(p, belief, a, EfePomdpForm::Value { pref_obs }).map(f64::from)
        }
        ObjectiveSpec::ItbrPomdp { beta, utility } => itbr_optimal_value_pomdp(p, belief, a, utility, *beta),
        ObjectiveSpec::Feef { pref_obs } => feef(p, belief, a, pref_obs).map(f64::from),
        _ => Err(Error::IncompatibleObjective { objective: spec.name(), model: "pomdp" }),
    }
}

/// Evaluates every action and reports the optimal set in the objective's sense.
pub fn select_action_mdp(m: &MdpModel, s_now: usize, spec: &ObjectiveSpec, tie_tol: f64) -> Result<ActionEvaluation> {
    let values = (0..m.n_actions()).map(|a| objective_value_mdp(m, s_now, a, spec)).collect::<Result<Vec<_>>>()?;
    ActionEvaluation::from_values(values, spec.sense(), tie_tol)
}

pub fn select_action_pomdp(
    p: &PomdpModel,
    belief: &BeliefState,
    spec: &ObjectiveSpec,
    tie_tol: f64,
) -> Result<ActionEvaluation> {
    let values = (0..p.n_actions()).map(|a| objective_value_pomdp(p, belief, a, spec)).collect::<Result<Vec<_>>>()?;
    ActionEvaluation::from_values(values, spec.sense(), tie_tol)
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use proptest::prelude::*;

    use super::*;
    use crate::agents::DEFAULT_TIE_TOLERANCE;
    use crate::envs::{build_paraglider, random_instance, InstanceSpec};
    use crate::math::CategoricalDist;
    use crate::models::{preference_from_rewards, Model, ModelKind};

    fn eu(c: f64) -> ObjectiveSpec {
        ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::power(c).unwrap() }
    }

    #[test]
    fn paraglider_selections() {
        let m = build_paraglider();
        let pref =
            preference_from_rewards(&m, &UtilityFunction::Linear, 1.0, &CategoricalDist::uniform(3).unwrap()).unwrap();
        let efe = select_action_mdp(&m, 0, &ObjectiveSpec::EfeMdp { pref }, DEFAULT_TIE_TOLERANCE).unwrap();
        assert_eq!(efe.optimal_set, vec![0, 1]);
        assert!(efe.tie);

        assert_eq!(select_action_mdp(&m, 0, &eu(0.5), DEFAULT_TIE_TOLERANCE).unwrap().optimal_set, vec![0]);
        let lin = select_action_mdp(&m, 0, &eu(1.0), DEFAULT_TIE_TOLERANCE).unwrap();
        assert_eq!(lin.optimal_set, vec![0, 1]);
        assert_eq!(select_action_mdp(&m, 0, &eu(2.0), DEFAULT_TIE_TOLERANCE).unwrap().optimal_set, vec![1]);
    }

    #[test]
    fn incompatible_objectives_are_rejected() {
        let m = build_paraglider();
        let pref =
            preference_from_rewards(&m, &UtilityFunction::Linear, 1.0, &CategoricalDist::uniform(3).unwrap()).unwrap();
        let spec = ObjectiveSpec::Feef { pref_obs: pref };
        assert!(matches!(
            select_action_mdp(&m, 0, &spec, DEFAULT_TIE_TOLERANCE),
            Err(Error::IncompatibleObjective { .. })
        ));
    }

    proptest! {
        #[test]
        fn eu_argmax_invariant_under_affine(seed in 0u64..500, c in 0.2f64..3.0, a in 0.1f64..10.0, b in -5.0f64..5.0) {
            let spec = InstanceSpec { kind: ModelKind::Mdp, n_states: 3, n_actions: 3, n_obs: 0, seed, reward_range: (0.0, 2.0) };
            let Model::Mdp(m) = random_instance(&spec).unwrap() else { unreachable!() };
            let base = select_action_mdp(&m, 0, &eu(c), DEFAULT_TIE_TOLERANCE).unwrap();
            // u' = a·u + b applied to the utility values: E[u'] = a·E[u] + b
            let values: vec::Vec<f64> = base.values.iter().map(|v| a * v + b).collect();
            let scaled = ActionEvaluation::from_values(values, base.sense, DEFAULT_TIE_TOLERANCE * a).unwrap();
            prop_assert_eq!(&base.optimal_set, &scaled.optimal_set);

            let lin = select_action_mdp(&m, 0, &ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::Linear }, DEFAULT_TIE_TOLERANCE).unwrap();
            let aff = select_action_mdp(&m, 0, &ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::affine(a, b).unwrap() }, DEFAULT_TIE_TOLERANCE * a).unwrap();
            prop_assert_eq!(lin.optimal_set, aff.optimal_set);
        }
    }
}
