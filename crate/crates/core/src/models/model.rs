use alloc::string::String;
use alloc::vec::Vec;

use super::description::{validate_model, ModelDescription, ModelKind, FORMAT_VERSION};
use crate::error::check_index;
use crate::math::CategoricalDist;
use crate::{Error, Result};

/// Finite-horizon MDP with state-only rewards and no discounting.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpModel {
    states: Vec<String>,
    actions: Vec<String>,
    /// `[action][state]`
    transition: Vec<Vec<CategoricalDist>>,
    reward: Vec<f64>,
    horizon: usize,
}

impl MdpModel {
    /// Discount factor; fixed.
    pub const DISCOUNT: f64 = 1.0;

    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        transition: Vec<Vec<Vec<f64>>>,
        reward: Vec<f64>,
        horizon: usize,
    ) -> Result<Self> {
        let desc = ModelDescription {
            format_version: FORMAT_VERSION,
            kind: ModelKind::Mdp,
            states,
            actions,
            transition,
            reward,
            horizon,
            discount: None,
            observations: None,
            likelihood: None,
        };
        Self::from_description(&desc)
    }

    pub fn from_description(desc: &ModelDescription) -> Result<Self> {
        let report = validate_model(desc);
        if !report.is_valid() {
            return Err(Error::InvalidModel(report));
        }
        if desc.kind != ModelKind::Mdp {
            return Err(Error::InvalidParameter("expected an mdp description".into()));
        }
        Ok(Self::from_valid(desc))
    }

    fn from_valid(desc: &ModelDescription) -> Self {
        let transition = desc
            .transition
            .iter()
            .map(|block| block.iter().map(|row| CategoricalDist::new(row.clone()).expect("validated row")).collect())
            .collect();
        Self {
            states: desc.states.clone(),
            actions: desc.actions.clone(),
            transition,
            reward: desc.reward.clone(),
            horizon: desc.horizon,
        }
    }

    pub fn to_description(&self) -> ModelDescription {
        ModelDescription {
            format_version: FORMAT_VERSION,
            kind: ModelKind::Mdp,
            states: self.states.clone(),
            actions: self.actions.clone(),
            transition: self
                .transition
                .iter()
                .map(|block| block.iter().map(|d| d.probs().to_vec()).collect())
                .collect(),
            reward: self.reward.clone(),
            horizon: self.horizon,
            discount: None,
            observations: None,
            likelihood: None,
        }
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    /// `P(·|a, s)`. Panics on out-of-range indices; see [`Self::check_state`].
    pub fn transition(&self, action: usize, state: usize) -> &CategoricalDist {
        &self.transition[action][state]
    }

    pub fn reward(&self) -> &[f64] {
        &self.reward
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn check_state(&self, s: usize) -> Result<()> {
        check_index("state", s, self.n_states())
    }

    pub fn check_action(&self, a: usize) -> Result<()> {
        check_index("action", a, self.n_actions())
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|l| l == label)
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|l| l == label)
    }
}

/// An [`MdpModel`] plus observations emitted from latent states.
#[derive(Debug, Clone, PartialEq)]
pub struct PomdpModel {
    base: MdpModel,
    observations: Vec<String>,
    /// `[state]` → distribution over observations
    likelihood: Vec<CategoricalDist>,
}

impl PomdpModel {
    pub fn new(base: MdpModel, observations: Vec<String>, likelihood: Vec<Vec<f64>>) -> Result<Self> {
        let mut desc = base.to_description();
        desc.kind = ModelKind::Pomdp;
        desc.observations = Some(observations);
        desc.likelihood = Some(likelihood);
        Self::from_description(&desc)
    }

    pub fn from_description(desc: &ModelDescription) -> Result<Self> {
        let report = validate_model(desc);
        if !report.is_valid() {
            return Err(Error::InvalidModel(report));
        }
        if desc.kind != ModelKind::Pomdp {
            return Err(Error::InvalidParameter("expected a pomdp description".into()));
        }
        let base = MdpModel::from_valid(desc);
        let observations = desc.observations.clone().expect("validated");
        let likelihood = desc
            .likelihood
            .as_ref()
            .expect("validated")
            .iter()
            .map(|row| CategoricalDist::new(row.clone()).expect("validated row"))
            .collect();
        Ok(Self { base, observations, likelihood })
    }

    pub fn to_description(&self) -> ModelDescription {
        let mut desc = self.base.to_description();
        desc.kind = ModelKind::Pomdp;
        desc.observations = Some(self.observations.clone());
        desc.likelihood = Some(self.likelihood.iter().map(|d| d.probs().to_vec()).collect());
        desc
    }

    pub fn base(&self) -> &MdpModel {
        &self.base
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn n_observations(&self) -> usize {
        self.observations.len()
    }

    /// `P(·|s)`.
    pub fn likelihood(&self, state: usize) -> &CategoricalDist {
        &self.likelihood[state]
    }

    pub fn check_observation(&self, o: usize) -> Result<()> {
        check_index("observation", o, self.n_observations())
    }
}

impl core::ops::Deref for PomdpModel {
    type Target = MdpModel;

    fn deref(&self) -> &MdpModel {
        &self.base
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Mdp(MdpModel),
    Pomdp(PomdpModel),
}

impl Model {
    pub fn from_description(desc: &ModelDescription) -> Result<Self> {
        match desc.kind {
            ModelKind::Mdp => MdpModel::from_description(desc).map(Model::Mdp),
            ModelKind::Pomdp => PomdpModel::from_description(desc).map(Model::Pomdp),
        }
    }

    pub fn to_description(&self) -> ModelDescription {
        match self {
            Model::Mdp(m) => m.to_description(),
            Model::Pomdp(p) => p.to_description(),
        }
    }

    pub fn mdp(&self) -> &MdpModel {
        match self {
            Model::Mdp(m) => m,
            Model::Pomdp(p) => p.base(),
        }
    }
}

impl From<MdpModel> for Model {
    fn from(m: MdpModel) -> Self {
        Model::Mdp(m)
    }
}

impl From<PomdpModel> for Model {
    fn from(p: PomdpModel) -> Self {
        Model::Pomdp(p)
    }
}

#[cfg(test)]
mod tests {
    use alloc::string::ToString;
    use alloc::vec;

    use super::*;
    use crate::models::ViolationKind;

    #[test]
    fn description_round_trip() {
        let m = MdpModel::new(
            vec!["x".to_string(), "y".to_string()],
            vec!["go".to_string()],
            vec![vec![vec![0.0, 1.0], vec![1.0, 0.0]]],
            vec![1.0, 2.0],
            3,
        )
        .unwrap();
        assert_eq!(MdpModel::from_description(&m.to_description()).unwrap(), m);
        let p = PomdpModel::new(m, vec!["o".to_string()], vec![vec![1.0], vec![1.0]]).unwrap();
        assert_eq!(Model::from_description(&p.to_description()).unwrap(), Model::Pomdp(p));
    }

    #[test]
    fn invalid_rows_surface_the_report() {
        let err = MdpModel::new(
            vec!["x".to_string(), "y".to_string()],
            vec!["go".to_string()],
            vec![vec![vec![0.5, 0.6], vec![1.0, 0.0]]],
            vec![1.0, 2.0],
            1,
        )
        .unwrap_err();
        match err {
            Error::InvalidModel(r) => assert!(r.has(ViolationKind::Normalization)),
            e => panic!("unexpected {e}"),
        }
    }
}
