use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math::NORMALIZATION_TOLERANCE;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Mdp,
    Pomdp,
}

/// Serialized form of an MDP or POMDP, exactly as it appears in model files.
///
/// `transition[a][s]` is the distribution over successor states after taking
/// action `a` in state `s`; `likelihood[s]` is the observation distribution
/// emitted by state `s`. An optional `discount` (alias `gamma`) is accepted
/// only so that files setting it to anything but 1 fail validation with a
/// clear message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescription {
    pub format_version: u32,
    pub kind: ModelKind,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub transition: Vec<Vec<Vec<f64>>>,
    pub reward: Vec<f64>,
    pub horizon: usize,
    #[serde(default, alias = "gamma", skip_serializing_if = "Option::is_none")]
    pub discount: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Version,
    Kind,
    Empty,
    DuplicateLabel,
    Shape,
    NonFinite,
    Negative,
    Normalization,
    Horizon,
    Discount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Field path, e.g. `transition[1][0]`.
    pub path: String,
    pub kind: ViolationKind,
    pub detail: String,
}

/// Every invariant violated by a model description. Empty iff valid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, path: impl Into<String>, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { path: path.into(), kind, detail: detail.into() });
    }

    fn check_row(&mut self, path: &str, row: &[f64], expected_len: usize) {
        if row.len() != expected_len {
            self.push(path, ViolationKind::Shape, format!("row has {} entries, expected {expected_len}", row.len()));
            return;
        }
        let mut bad = false;
        for (i, &p) in row.iter().enumerate() {
            if !p.is_finite() {
                self.push(format!("{path}[{i}]"), ViolationKind::NonFinite, format!("{p}"));
                bad = true;
            } else if p < 0.0 {
                self.push(format!("{path}[{i}]"), ViolationKind::Negative, format!("{p}"));
                bad = true;
            }
        }
        if !bad {
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
                self.push(path, ViolationKind::Normalization, format!("row sums to {total}"));
            }
        }
    }

    fn check_labels(&mut self, path: &str, labels: &[String]) {
        if labels.is_empty() {
            self.push(path, ViolationKind::Empty, "no labels");
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                self.push(format!("{path}[{i}]"), ViolationKind::DuplicateLabel, format!("{l:?} repeated"));
            }
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {:?}: {}", v.path, v.kind, v.detail)?;
        }
        Ok(())
    }
}

/// Lists every violated invariant of `desc`, with index paths.
pub fn validate_model(desc: &ModelDescription) -> ValidationReport {
    let mut r = ValidationReport::default();
    if desc.format_version != FORMAT_VERSION {
        r.push(
            "format_version",
            ViolationKind::Version,
            format!("unsupported version {}, expected {FORMAT_VERSION}", desc.format_version),
        );
    }
    r.check_labels("states", &desc.states);
    r.check_labels("actions", &desc.actions);
    let n_states = desc.states.len();
    let n_actions = desc.actions.len();

    if desc.transition.len() != n_actions {
        r.push(
            "transition",
            ViolationKind::Shape,
            format!("{} action blocks, expected {n_actions}", desc.transition.len()),
        );
    }
    for (a, block) in desc.transition.iter().enumerate() {
        if block.len() != n_states {
            r.push(
                format!("transition[{a}]"),
                ViolationKind::Shape,
                format!("{} rows, expected {n_states}", block.len()),
            );
        }
        for (s, row) in block.iter().enumerate() {
            r.check_row(&format!("transition[{a}][{s}]"), row, n_states);
        }
    }

    if desc.reward.len() != n_states {
        r.push("reward", ViolationKind::Shape, format!("{} entries, expected {n_states}", desc.reward.len()));
    }
    for (s, &x) in desc.reward.iter().enumerate() {
        if !x.is_finite() {
            r.push(format!("reward[{s}]"), ViolationKind::NonFinite, format!("{x}"));
        } else if x < 0.0 {
            r.push(format!("reward[{s}]"), ViolationKind::Negative, format!("rewards must be >= 0, got {x}"));
        }
    }
    if desc.horizon == 0 {
        r.push("horizon", ViolationKind::Horizon, "horizon must be >= 1");
    }
    if let Some(g) = desc.discount {
        if g != 1.0 {
            r.push("discount", ViolationKind::Discount, format!("discount must be exactly 1, got {g}"));
        }
    }

    match desc.kind {
        ModelKind::Mdp => {
            if desc.observations.is_some() || desc.likelihood.is_some() {
                r.push("kind", ViolationKind::Kind, "mdp models cannot carry observations or likelihood");
            }
        }
        ModelKind::Pomdp => match (&desc.observations, &desc.likelihood) {
            (Some(obs), Some(lik)) => {
                r.check_labels("observations", obs);
                if lik.len() != n_states {
                    r.push("likelihood", ViolationKind::Shape, format!("{} rows, expected {n_states}", lik.len()));
                }
                for (s, row) in lik.iter().enumerate() {
                    r.check_row(&format!("likelihood[{s}]"), row, obs.len());
                }
            }
            _ => r.push("kind", ViolationKind::Kind, "pomdp models need observations and likelihood"),
        },
    }
    r
}
