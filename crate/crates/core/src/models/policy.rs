use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One step of a finite-horizon policy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyStep {
    Fixed(usize),
    /// Action chosen from the most recent observation (for MDPs: the current state).
    Reactive(BTreeMap<usize, usize>),
}

/// A sequence of steps, executed from the first period on.
///
/// Open-loop action sequences use only [`PolicyStep::Fixed`]. Reactive steps
/// let a policy such as "visit the cue, then go to the arm it indicates" be
/// expressed and enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Policy {
    pub steps: Vec<PolicyStep>,
}

impl Policy {
    pub fn open_loop(actions: &[usize]) -> Self {
        Self { steps: actions.iter().map(|&a| PolicyStep::Fixed(a)).collect() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn then(mut self, step: PolicyStep) -> Self {
        self.steps.push(step);
        self
    }

    /// Action for `step`, given the latest observation when there is one.
    pub fn action(&self, step: usize, last_observation: Option<usize>) -> Result<usize> {
        match &self.steps[step] {
            PolicyStep::Fixed(a) => Ok(*a),
            PolicyStep::Reactive(map) => {
                let o = last_observation.ok_or(Error::PolicyIncomplete { step, observation: usize::MAX })?;
                map.get(&o).copied().ok_or(Error::PolicyIncomplete { step, observation: o })
            }
        }
    }

    /// All action indices the policy can emit.
    pub fn actions(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().flat_map(|s| -> Vec<usize> {
            match s {
                PolicyStep::Fixed(a) => alloc::vec![*a],
                PolicyStep::Reactive(m) => m.values().copied().collect(),
            }
        })
    }

    /// Human-readable label, e.g. `go-cue; cue-left->go-left, cue-right->go-right`.
    pub fn describe(&self, actions: &[String], observations: &[String]) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                out.push_str("; ");
            }
            match step {
                PolicyStep::Fixed(a) => out.push_str(label(actions, *a)),
                PolicyStep::Reactive(m) => {
                    for (j, (o, a)) in m.iter().enumerate() {
                        if j > 0 {
                            out.push_str(", ");
                        }
                        let _ = write!(out, "{}->{}", label(observations, *o), label(actions, *a));
                    }
                }
            }
        }
        out
    }
}

fn label(labels: &[String], i: usize) -> &str {
    labels.get(i).map(String::as_str).unwrap_or("?")
}

#[cfg(test)]
mod tests {
    use alloc::string::ToString;
    use alloc::vec;

    use super::*;

    #[test]
    fn reactive_lookup() {
        let p = Policy::open_loop(&[2]).then(PolicyStep::Reactive(BTreeMap::from([(1, 0), (2, 1)])));
        assert_eq!(p.action(0, None).unwrap(), 2);
        assert_eq!(p.action(1, Some(2)).unwrap(), 1);
        assert_eq!(p.action(1, Some(0)), Err(Error::PolicyIncomplete { step: 1, observation: 0 }));
        let acts = vec!["l".to_string(), "r".to_string(), "cue".to_string()];
        let obs = vec!["n".to_string(), "L".to_string(), "R".to_string()];
        assert_eq!(p.describe(&acts, &obs), "cue; L->l, R->r");
    }
}
