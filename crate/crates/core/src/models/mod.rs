//! Environment and preference data model.

mod belief;
mod description;
mod lottery;
mod model;
mod policy;
mod preference;
mod utility;

pub use belief::BeliefState;
pub use description::{
    validate_model, ModelDescription, ModelKind, ValidationReport, Violation, ViolationKind, FORMAT_VERSION,
};
pub use lottery::{Lottery, RiskAttitude, RISK_TOLERANCE};
pub use model::{MdpModel, Model, PomdpModel};
pub use policy::{Policy, PolicyStep};
pub use preference::{preference_from_rewards, preference_from_values, PreferenceDistribution, Provenance, Support};
pub use utility::UtilityFunction;
