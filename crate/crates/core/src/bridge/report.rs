use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::envs::InstanceSpec;
use crate::models::{ModelDescription, UtilityFunction};

/// Identity names, in the order they sort in reports.
pub mod names {
    pub const EFE_FEEF_RELATION: &str = "efe-feef-relation";
    pub const EFE_MDP_FORMS: &str = "efe-mdp-forms";
    pub const FEEF_DECOMPOSITION: &str = "feef-decomposition";
    pub const GIBBS_OPTIMALITY: &str = "gibbs-optimality";
    pub const ITBR_DIVERGENCE_MDP: &str = "itbr-divergence-mdp";
    pub const PREFERENCE_EQUALITY: &str = "preference-equality";
}

/// Default tolerances, keyed by identity name.
pub mod tolerances {
    pub const EFE_FEEF_RELATION: f64 = 1e-10;
    pub const EFE_MDP_FORMS: f64 = 1e-12;
    pub const FEEF_DECOMPOSITION: f64 = 1e-10;
    pub const GIBBS_OPTIMALITY: f64 = 1e-12;
    pub const ITBR_DIVERGENCE_MDP: f64 = 1e-12;
    pub const PREFERENCE_EQUALITY: f64 = 1e-12;
}

/// Default tolerance for a named identity, if it is one of the built-in ones.
pub fn default_tolerance(identity: &str) -> Option<f64> {
    Some(match identity {
        names::EFE_FEEF_RELATION => tolerances::EFE_FEEF_RELATION,
        names::EFE_MDP_FORMS => tolerances::EFE_MDP_FORMS,
        names::FEEF_DECOMPOSITION => tolerances::FEEF_DECOMPOSITION,
        names::GIBBS_OPTIMALITY => tolerances::GIBBS_OPTIMALITY,
        names::ITBR_DIVERGENCE_MDP => tolerances::ITBR_DIVERGENCE_MDP,
        names::PREFERENCE_EQUALITY => tolerances::PREFERENCE_EQUALITY,
        _ => return None,
    })
}

/// The instance an identity was checked on, sufficient to re-run the check.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Generator settings, when the model came from [`crate::envs::random_instance`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    /// The model itself, when it was not generated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDescription>,
    /// State (MDP) the check was run from, or the worst one when several were checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<usize>,
    /// Action attaining the reported residual.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<UtilityFunction>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
    /// Named vectors such as a belief, a prior or a utility profile.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, Vec<f64>>,
}

impl Witness {
    pub fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.into(), value);
        self
    }

    pub fn with_vector(mut self, name: &str, values: &[f64]) -> Self {
        self.vectors.insert(name.into(), values.into());
        self
    }
}

/// Verdict for one numerically checked identity or assertion.
///
/// `pass` is always `residual <= tolerance`; a NaN residual fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub seed: Option<u64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Witness,
    pub notes: String,
}

impl IdentityReport {
    pub fn new(identity_name: impl Into<String>, residual: f64, tolerance: f64, witness: Witness) -> Self {
        Self {
            identity_name: identity_name.into(),
            seed: None,
            residual,
            tolerance,
            pass: residual <= tolerance,
            witness,
            notes: String::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    /// Re-judges the residual against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.residual <= tolerance;
        self
    }
}

/// Orders reports by identity name, then seed.
pub fn sort_canonical(reports: &mut [IdentityReport]) {
    reports.sort_by(|a, b| a.identity_name.cmp(&b.identity_name).then(a.seed.cmp(&b.seed)));
}
