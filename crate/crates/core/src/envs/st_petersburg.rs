use alloc::format;
use alloc::vec::Vec;

use libm::ldexp;

use crate::math::CategoricalDist;
use crate::models::Lottery;
use crate::{Error, Result};

/// Largest truncation depth; payouts up to 2^60 are exact in f64.
pub const MAX_ST_PETERSBURG_TERMS: usize = 60;

/// Truncated St. Petersburg lottery.
///
/// Outcome `2^i` with probability `2^-i` for `i = 1..=n_terms`, followed by a
/// terminal outcome `2^n_terms` carrying the tail mass `2^-n_terms`. All
/// entries are powers of two, so the distribution sums to exactly 1.
pub fn build_st_petersburg(n_terms: usize) -> Result<Lottery> {
    if !(1..=MAX_ST_PETERSBURG_TERMS).contains(&n_terms) {
        return Err(Error::InvalidParameter(format!(
            "n_terms must be in 1..={MAX_ST_PETERSBURG_TERMS}, got {n_terms}"
        )));
    }
    let mut outcomes: Vec<f64> = (1..=n_terms).map(|i| ldexp(1.0, i as i32)).collect();
    let mut probs: Vec<f64> = (1..=n_terms).map(|i| ldexp(1.0, -(i as i32))).collect();
    outcomes.push(ldexp(1.0, n_terms as i32));
    probs.push(ldexp(1.0, -(n_terms as i32)));
    Lottery::new(outcomes, CategoricalDist::new(probs)?)
}

/// Expected payout of the untruncated terms only (every term contributes 1).
pub fn st_petersburg_pre_tail_value(lottery: &Lottery) -> f64 {
    let n = lottery.outcomes().len() - 1;
    lottery.dist().probs()[..n].iter().zip(&lottery.outcomes()[..n]).map(|(p, x)| p * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::UtilityFunction;

    #[test]
    fn single_toss() {
        let l = build_st_petersburg(1).unwrap();
        assert_eq!(l.outcomes(), &[2.0, 2.0]);
        assert_eq!(l.dist().probs(), &[0.5, 0.5]);
        assert_eq!(l.expected_value(), 2.0);
    }

    #[test]
    fn log_utility_converges_to_two_ln_two() {
        let l = build_st_petersburg(60).unwrap();
        let eu = l.expected_utility(&UtilityFunction::Log).unwrap();
        assert!((eu - 2.0 * core::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn pre_tail_value_grows_by_one_per_term() {
        for n in 1..=MAX_ST_PETERSBURG_TERMS {
            let l = build_st_petersburg(n).unwrap();
            assert_eq!(st_petersburg_pre_tail_value(&l), n as f64);
            assert_eq!(l.dist().probs().iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn range_checked() {
        assert!(build_st_petersburg(0).is_err());
        assert!(build_st_petersburg(61).is_err());
    }
}
