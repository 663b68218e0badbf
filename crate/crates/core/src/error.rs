use alloc::string::String;

use crate::models::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("absolute continuity violated at index {index}: p > 0 where q = 0")]
    AbsoluteContinuityViolation { index: usize },
    #[error("Gibbs normalizer is zero or not finite")]
    DegenerateNormalizer,
    #[error("utility {utility} is undefined at {argument}")]
    Domain { utility: &'static str, argument: f64 },
    #[error("lottery is degenerate (all mass on a single outcome)")]
    DegenerateLottery,
    #[error("observation {observation} has zero probability under the predicted belief")]
    ZeroEvidence { observation: usize },
    #[error("utilities are constant on the prior support; beta is undefined")]
    ConstantUtility,
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("objective {objective} does not apply to {model} models")]
    IncompatibleObjective { objective: &'static str, model: &'static str },
    #[error("policy has {len} steps but the horizon is {horizon}")]
    PolicyTooLong { len: usize, horizon: usize },
    #[error("policy step {step} has no action for observation {observation}")]
    PolicyIncomplete { step: usize, observation: usize },
    #[error("invalid model:\n{0}")]
    InvalidModel(ValidationReport),
}

pub(crate) fn check_index(what: &'static str, index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, len })
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
