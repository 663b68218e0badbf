//! `NAME[:PARAM=VAL,…]` objective descriptors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use agency_core::agents::ObjectiveSpec;
use agency_core::models::{
    preference_from_rewards, preference_from_values, Model, PomdpModel, PreferenceDistribution, Support,
    UtilityFunction,
};
use agency_core::CategoricalDist;

use crate::ConfigError;

/// Objective names accepted on the command line.
pub const OBJECTIVE_NAMES: [&str; 9] = [
    "reward-max",
    "expected-utility",
    "efe-mdp",
    "divergence-mdp",
    "itbr-mdp",
    "efe-pomdp-risk-ambiguity",
    "efe-pomdp-value",
    "feef",
    "itbr-pomdp",
];

const PARAMETERS: [&str; 5] = ["utility", "beta", "c", "a", "b"];

/// An objective as written on the command line, before it is bound to a model.
///
/// Parameters: `utility=linear|power|log|affine` with `c` (power exponent)
/// or `a`, `b` (affine slope and offset), and `beta` (preference or
/// bounded-rationality inverse temperature, default 1). Giving `c` alone
/// selects a power utility, `a`/`b` alone an affine one.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveDescriptor {
    pub name: String,
    pub utility_kind: Option<String>,
    pub params: BTreeMap<String, f64>,
}

impl FromStr for ObjectiveDescriptor {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (s.trim(), None),
        };
        if !OBJECTIVE_NAMES.contains(&name) {
            return Err(ConfigError(format!(
                "unknown objective `{name}` (expected one of: {})",
                OBJECTIVE_NAMES.join(", ")
            )));
        }
        let mut utility_kind = None;
        let mut params = BTreeMap::new();
        for item in rest.into_iter().flat_map(|r| r.split(',')).filter(|i| !i.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError(format!("objective parameter `{item}` is not PARAM=VAL")))?;
            if !PARAMETERS.contains(&key) {
                return Err(ConfigError(format!(
                    "unknown objective parameter `{key}` (expected one of: {})",
                    PARAMETERS.join(", ")
                )));
            }
            if key == "utility" {
                utility_kind = Some(value.to_string());
            } else {
                let v: f64 = value
                    .parse()
                    .map_err(|_| ConfigError(format!("objective parameter `{key}`: bad number `{value}`")))?;
                params.insert(key.to_string(), v);
            }
        }
        Ok(Self { name: name.to_string(), utility_kind, params })
    }
}

impl fmt::Display for ObjectiveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        let mut items: Vec<String> = self.utility_kind.iter().map(|u| format!("utility={u}")).collect();
        items.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        if !items.is_empty() {
            write!(f, ":{}", items.join(","))?;
        }
        Ok(())
    }
}

impl ObjectiveDescriptor {
    pub fn utility(&self) -> Result<UtilityFunction, ConfigError> {
        let param = |k: &str| self.params.get(k).copied();
        let kind = match &self.utility_kind {
            Some(k) => k.as_str(),
            None if param("c").is_some() => "power",
            None if param("a").is_some() || param("b").is_some() => "affine",
            None => "linear",
        };
        let u = match kind {
            "linear" => UtilityFunction::Linear,
            "log" => UtilityFunction::Log,
            "power" => UtilityFunction::power(
                param("c").ok_or_else(|| ConfigError("power utility needs parameter `c`".into()))?,
            )
            .map_err(ConfigError::from_core)?,
            "affine" => UtilityFunction::affine(param("a").unwrap_or(1.0), param("b").unwrap_or(0.0))
                .map_err(ConfigError::from_core)?,
            other => {
                return Err(ConfigError(format!("unknown utility `{other}` (expected linear, power, log or affine)")))
            }
        };
        Ok(u)
    }

    pub fn beta(&self) -> f64 {
        self.params.get("beta").copied().unwrap_or(1.0)
    }

    /// Binds the descriptor to a model, building any preference distribution
    /// it needs from the model's rewards with a uniform prior.
    pub fn build(&self, model: &Model) -> Result<ObjectiveSpec, ConfigError> {
        let u = self.utility()?;
        let beta = self.beta();
        let core = ConfigError::from_core;
        let state_pref = |m: &agency_core::models::MdpModel| {
            preference_from_rewards(m, &u, beta, &CategoricalDist::uniform(m.n_states()).map_err(core)?).map_err(core)
        };
        let pomdp = || match model {
            Model::Pomdp(p) => Ok(p),
            Model::Mdp(_) => Err(ConfigError(format!("objective `{}` needs a POMDP model", self.name))),
        };
        let spec = match self.name.as_str() {
            "reward-max" => ObjectiveSpec::RewardMax,
            "expected-utility" => ObjectiveSpec::ExpectedUtility { utility: u },
            "efe-mdp" => ObjectiveSpec::EfeMdp { pref: state_pref(model.mdp())? },
            "divergence-mdp" => ObjectiveSpec::DivergenceMdp { pref: state_pref(model.mdp())? },
            "itbr-mdp" => ObjectiveSpec::ItbrMdp { beta, utility: u },
            "itbr-pomdp" => ObjectiveSpec::ItbrPomdp { beta, utility: u },
            "efe-pomdp-risk-ambiguity" => {
                let p = pomdp()?;
                ObjectiveSpec::EfePomdpRiskAmbiguity {
                    pref_states: state_pref(p.base())?,
                    pref_obs: observation_preference(p, &u, beta)?,
                }
            }
            "efe-pomdp-value" => ObjectiveSpec::EfePomdpValue { pref_obs: observation_preference(pomdp()?, &u, beta)? },
            "feef" => ObjectiveSpec::Feef { pref_obs: observation_preference(pomdp()?, &u, beta)? },
            other => unreachable!("validated objective name {other}"),
        };
        spec.check().map_err(core)?;
        Ok(spec)
    }
}

/// Observation preference for a POMDP: each observation is valued at the
/// likelihood-weighted mean utility of the states that emit it, then Gibbs
/// weighted with a uniform prior.
pub fn observation_preference(
    p: &PomdpModel,
    u: &UtilityFunction,
    beta: f64,
) -> Result<PreferenceDistribution, ConfigError> {
    let core = ConfigError::from_core;
    let utilities = u.apply_all(p.reward()).map_err(core)?;
    let values: Vec<f64> = (0..p.n_observations())
        .map(|o| {
            let (mut num, mut den) = (0.0, 0.0);
            for (s, us) in utilities.iter().enumerate() {
                let w = p.likelihood(s).get(o);
                num += w * us;
                den += w;
            }
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .collect();
    let prior = CategoricalDist::uniform(p.n_observations()).map_err(core)?;
    preference_from_values(Support::Observations, &values, beta, &prior).map_err(core)
}
