use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::CategoricalDist;
use crate::models::{BeliefState, MdpModel, PomdpModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TMazeVariant {
    /// Arms are absorbing; the wrong arm pays -1 per period.
    Absorbing,
    /// Arms can be left (back to the center); the correct arm pays +1 per period, the wrong arm 0.
    Correctable,
}

/// T-maze POMDP together with the payoff channel used for lotteries.
///
/// States are `context × location` with contexts {reward-left, reward-right}
/// and locations {center, left-arm, right-arm, cue}; index `4·context + location`.
#[derive(Debug, Clone, PartialEq)]
pub struct TMaze {
    pub variant: TMazeVariant,
    pub model: PomdpModel,
    /// Per-period payoff by state. May be negative, unlike the model's reward.
    pub payoff: Vec<f64>,
    /// Reward attached to each observation (the reward of the states emitting it).
    pub observation_reward: Vec<f64>,
    pub initial_belief: BeliefState,
}

impl TMaze {
    pub const CENTER: usize = 0;
    pub const LEFT_ARM: usize = 1;
    pub const RIGHT_ARM: usize = 2;
    pub const CUE: usize = 3;

    pub const GO_LEFT: usize = 0;
    pub const GO_RIGHT: usize = 1;
    pub const GO_CUE: usize = 2;
    pub const STAY: usize = 3;

    pub const OBS_NULL: usize = 0;
    pub const OBS_CUE_LEFT: usize = 1;
    pub const OBS_CUE_RIGHT: usize = 2;
    pub const OBS_REWARD: usize = 3;
    pub const OBS_PUNISHMENT: usize = 4;

    pub fn state(context: usize, location: usize) -> usize {
        4 * context + location
    }

    /// Arm holding the reward in `context` (0 = left, 1 = right).
    pub fn correct_arm(context: usize) -> usize {
        if context == 0 {
            Self::LEFT_ARM
        } else {
            Self::RIGHT_ARM
        }
    }
}

const CONTEXTS: [&str; 2] = ["reward-left", "reward-right"];
const LOCATIONS: [&str; 4] = ["center", "left-arm", "right-arm", "cue"];

fn successor(variant: TMazeVariant, location: usize, action: usize) -> usize {
    let is_arm = location == TMaze::LEFT_ARM || location == TMaze::RIGHT_ARM;
    let target = match action {
        TMaze::GO_LEFT => TMaze::LEFT_ARM,
        TMaze::GO_RIGHT => TMaze::RIGHT_ARM,
        TMaze::GO_CUE => TMaze::CUE,
        _ => location,
    };
    match (variant, is_arm) {
        (TMazeVariant::Absorbing, true) => location,
        (TMazeVariant::Correctable, true) if target != location => TMaze::CENTER,
        _ => target,
    }
}

/// Builds the two-period T-maze.
///
/// Movement is deterministic and the context never changes. The center emits
/// `null`, the cue reveals the context, and each arm emits `reward` or
/// `punishment` depending on the context. The model reward is the payoff
/// shifted to be nonnegative.
pub fn build_tmaze(variant: TMazeVariant) -> TMaze {
    let n = 8;
    let states: Vec<String> = (0..n).map(|s| format!("{}:{}", CONTEXTS[s / 4], LOCATIONS[s % 4])).collect();
    let actions: Vec<String> = ["go-left", "go-right", "go-cue", "stay"].iter().map(|s| s.to_string()).collect();
    let observations: Vec<String> =
        ["null", "cue-left", "cue-right", "reward", "punishment"].iter().map(|s| s.to_string()).collect();

    let transition: Vec<Vec<Vec<f64>>> = (0..actions.len())
        .map(|a| {
            (0..n)
                .map(|s| {
                    let mut row = vec![0.0; n];
                    row[TMaze::state(s / 4, successor(variant, s % 4, a))] = 1.0;
                    row
                })
                .collect()
        })
        .collect();

    let wrong_payoff = match variant {
        TMazeVariant::Absorbing => -1.0,
        TMazeVariant::Correctable => 0.0,
    };
    let mut payoff = vec![0.0; n];
    let mut likelihood = vec![vec![0.0; observations.len()]; n];
    for s in 0..n {
        let (context, location) = (s / 4, s % 4);
        let obs = match location {
            TMaze::CENTER => TMaze::OBS_NULL,
            TMaze::CUE => TMaze::OBS_CUE_LEFT + context,
            arm if arm == TMaze::correct_arm(context) => {
                payoff[s] = 1.0;
                TMaze::OBS_REWARD
            }
            _ => {
                payoff[s] = wrong_payoff;
                TMaze::OBS_PUNISHMENT
            }
        };
        likelihood[s][obs] = 1.0;
    }
    let floor = payoff.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
    let reward: Vec<f64> = payoff.iter().map(|p| p - floor).collect();
    let observation_reward = vec![-floor, -floor, -floor, 1.0 - floor, wrong_payoff - floor];

    let base = MdpModel::new(states, actions, transition, reward, 2).expect("valid T-maze");
    let model = PomdpModel::new(base, observations, likelihood).expect("valid T-maze");
    let mut init = vec![0.0; n];
    init[TMaze::state(0, TMaze::CENTER)] = 0.5;
    init[TMaze::state(1, TMaze::CENTER)] = 0.5;
    let initial_belief = BeliefState::new(CategoricalDist::new(init).expect("valid belief"));
    TMaze { variant, model, payoff, observation_reward, initial_belief }
}
