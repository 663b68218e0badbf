use alloc::format;

use crate::math::{gibbs, kl_divergence, CategoricalDist};
use crate::{Error, Result};

/// Result of inverting a KL deliberation budget into an inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaForBudget {
    pub beta: f64,
    /// `D_KL[gibbs(prior, u, β) ‖ prior]` at the returned β.
    pub kl: f64,
    /// The budget met or exceeded the supremum of attainable divergences; `beta`
    /// is then the smallest power of two whose divergence is within tolerance of it.
    pub saturated: bool,
}

const KL_TOLERANCE: f64 = 1e-10;
const MAX_BETA: f64 = 1e300;

fn kl_at(prior: &CategoricalDist, utilities: &[f64], beta: f64) -> Result<f64> {
    Ok(kl_divergence(&gibbs(prior, utilities, beta)?, prior)?.value())
}

/// Finds β with `D_KL[gibbs(prior, utilities, β) ‖ prior] = min(K, sup)` by
/// bisection. The divergence is nondecreasing in β; its supremum is
/// `−ln prior(argmax utilities)`.
pub fn kl_budget_to_beta(prior: &CategoricalDist, utilities: &[f64], budget: f64) -> Result<BetaForBudget> {
    crate::error::check_len(prior.len(), utilities.len())?;
    if !(budget >= 0.0) || budget.is_nan() {
        return Err(Error::InvalidParameter(format!("budget must be >= 0 nats, got {budget}")));
    }
    let on_support = || prior.support().map(|i| utilities[i]);
    let max = on_support().fold(f64::NEG_INFINITY, f64::max);
    let min = on_support().fold(f64::INFINITY, f64::min);
    if max == min {
        return Err(Error::ConstantUtility);
    }
    if budget == 0.0 {
        return Ok(BetaForBudget { beta: 0.0, kl: 0.0, saturated: false });
    }
    let top_mass: f64 = prior.support().filter(|&i| utilities[i] == max).map(|i| prior.get(i)).sum();
    let sup = -libm::log(top_mass);

    if budget >= sup - KL_TOLERANCE {
        let mut beta = 1.0;
        let mut kl = kl_at(prior, utilities, beta)?;
        while sup - kl > KL_TOLERANCE && beta < MAX_BETA {
            beta *= 2.0;
            kl = kl_at(prior, utilities, beta)?;
        }
        return Ok(BetaForBudget { beta, kl, saturated: true });
    }

    let (mut lo, mut hi) = (0.0, 1.0);
    while kl_at(prior, utilities, hi)? < budget {
        lo = hi;
        hi *= 2.0;
    }
    let mut mid = hi;
    let mut kl = kl_at(prior, utilities, hi)?;
    for _ in 0..400 {
        if (kl - budget).abs() <= KL_TOLERANCE {
            break;
        }
        mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        kl = kl_at(prior, utilities, mid)?;
        if kl < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BetaForBudget { beta: mid, kl, saturated: false })
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;

    fn uniform(n: usize) -> CategoricalDist {
        CategoricalDist::uniform(n).unwrap()
    }

    #[test]
    fn zero_budget() {
        let r = kl_budget_to_beta(&uniform(2), &[1.0, 0.0], 0.0).unwrap();
        assert_eq!(r.beta, 0.0);
    }

    #[test]
    fn budget_near_supremum() {
        let k = core::f64::consts::LN_2 - 1e-3;
        let r = kl_budget_to_beta(&uniform(2), &[1.0, 0.0], k).unwrap();
        assert!(!r.saturated);
        assert!(r.beta > 5.0);
        // direct evaluation of the divergence at the returned beta
        let q = gibbs(&uniform(2), &[1.0, 0.0], r.beta).unwrap();
        let direct = q.probs().iter().map(|p| if *p > 0.0 { p * libm::log(2.0 * p) } else { 0.0 }).sum::<f64>();
        assert!((direct - k).abs() < 1e-9);
    }

    #[test]
    fn budget_beyond_supremum_is_flagged() {
        let r = kl_budget_to_beta(&uniform(2), &[1.0, 0.0], 5.0).unwrap();
        assert!(r.saturated);
        assert!((r.kl - core::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn monotone_in_budget() {
        let prior = CategoricalDist::new(vec![0.2, 0.5, 0.3]).unwrap();
        let u = [0.4, -1.0, 2.0];
        let mut last = 0.0;
        for i in 1..40 {
            let k = 0.03 * i as f64;
            let r = kl_budget_to_beta(&prior, &u, k).unwrap();
            assert!(r.beta >= last);
            assert!((r.kl - k).abs() < 1e-9 || r.saturated);
            last = r.beta;
        }
    }

    #[test]
    fn constant_utilities_rejected() {
        let prior = CategoricalDist::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(kl_budget_to_beta(&prior, &[1.0, 9.0, 1.0], 0.1), Err(Error::ConstantUtility));
    }
}
