use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::models::{PreferenceDistribution, UtilityFunction};
use crate::{Error, Result};

/// Absolute gap within which two action values count as tied.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

/// One account of agency, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    /// Expected reward.
    RewardMax,
    ExpectedUtility {
        utility: UtilityFunction,
    },
    /// `D_KL[P(s'|a,s) ‖ P(s|C)]`.
    EfeMdp {
        pref: PreferenceDistribution,
    },
    /// Ambiguity + risk.
    EfePomdpRiskAmbiguity {
        pref_states: PreferenceDistribution,
        pref_obs: PreferenceDistribution,
    },
    /// −intrinsic value − extrinsic value.
    EfePomdpValue {
        pref_obs: PreferenceDistribution,
    },
    /// ITBR free energy at its optimal posterior.
    ItbrMdp {
        beta: f64,
        utility: UtilityFunction,
    },
    ItbrPomdp {
        beta: f64,
        utility: UtilityFunction,
    },
    /// `D_KL[P(s'|a,s) ‖ P*(s)]`.
    DivergenceMdp {
        pref: PreferenceDistribution,
    },
    /// Free energy of the expected future.
    Feef {
        pref_obs: PreferenceDistribution,
    },
}

impl ObjectiveSpec {
    pub fn sense(&self) -> Sense {
        match self {
            ObjectiveSpec::RewardMax
            | ObjectiveSpec::ExpectedUtility { .. }
            | ObjectiveSpec::ItbrMdp { .. }
            | ObjectiveSpec::ItbrPomdp { .. } => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveSpec::RewardMax => "reward-max",
            ObjectiveSpec::ExpectedUtility { .. } => "expected-utility",
            ObjectiveSpec::EfeMdp { .. } => "efe-mdp",
            ObjectiveSpec::EfePomdpRiskAmbiguity { .. } => "efe-pomdp-risk-ambiguity",
            ObjectiveSpec::EfePomdpValue { .. } => "efe-pomdp-value",
            ObjectiveSpec::ItbrMdp { .. } => "itbr-mdp",
            ObjectiveSpec::ItbrPomdp { .. } => "itbr-pomdp",
            ObjectiveSpec::DivergenceMdp { .. } => "divergence-mdp",
            ObjectiveSpec::Feef { .. } => "feef",
        }
    }

    /// Objectives scored on the cumulative payoff of a whole trajectory rather
    /// than summed per step.
    pub fn is_terminal_utility(&self) -> bool {
        matches!(self, ObjectiveSpec::RewardMax | ObjectiveSpec::ExpectedUtility { .. })
    }

    pub fn utility(&self) -> Option<UtilityFunction> {
        match self {
            ObjectiveSpec::RewardMax => Some(UtilityFunction::Linear),
            ObjectiveSpec::ExpectedUtility { utility }
            | ObjectiveSpec::ItbrMdp { utility, .. }
            | ObjectiveSpec::ItbrPomdp { utility, .. } => Some(*utility),
            _ => None,
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            ObjectiveSpec::ItbrMdp { beta, utility } | ObjectiveSpec::ItbrPomdp { beta, utility } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(Error::InvalidParameter(format!("ITBR needs beta > 0, got {beta}")));
                }
                utility.check_parameters()
            }
            ObjectiveSpec::ExpectedUtility { utility } => utility.check_parameters(),
            _ => Ok(()),
        }
    }
}

/// Objective values for every action and the set attaining the optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionEvaluation {
    pub values: Vec<f64>,
    pub optimal_set: Vec<usize>,
    pub tie: bool,
    pub sense: Sense,
}

impl ActionEvaluation {
    /// Collects every index within `tie_tol` of the best value. Ties are kept as sets.
    pub fn from_values(values: Vec<f64>, sense: Sense, tie_tol: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("no actions to evaluate".into()));
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidParameter(format!("objective value for action {i} is NaN")));
        }
        if !(tie_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!("tie tolerance must be >= 0, got {tie_tol}")));
        }
        let best = match sense {
            Sense::Maximize => values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            Sense::Minimize => values.iter().cloned().fold(f64::INFINITY, f64::min),
        };
        let optimal_set: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == best || (v - best).abs() <= tie_tol)
            .map(|(i, _)| i)
            .collect();
        let tie = optimal_set.len() > 1;
        Ok(Self { values, optimal_set, tie, sense })
    }

    pub fn best_value(&self) -> f64 {
        self.values[self.optimal_set[0]]
    }
}
