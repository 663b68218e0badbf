use alloc::format;
use core::fmt;

use libm::{log, pow};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A utility function applied to a reward or payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UtilityFunction {
    Linear,
    /// `r^c`, `c > 0`. Concave for `c < 1`, convex for `c > 1`.
    Power {
        c: f64,
    },
    /// `ln r`, defined for `r > 0`.
    Log,
    /// `a·r + b`, `a > 0`.
    Affine {
        a: f64,
        b: f64,
    },
}

impl UtilityFunction {
    pub fn power(c: f64) -> Result<Self> {
        let u = UtilityFunction::Power { c };
        u.check_parameters()?;
        Ok(u)
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        let u = UtilityFunction::Affine { a, b };
        u.check_parameters()?;
        Ok(u)
    }

    pub fn check_parameters(&self) -> Result<()> {
        match *self {
            UtilityFunction::Power { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidParameter(format!("power exponent must be > 0, got {c}")))
            }
            UtilityFunction::Affine { a, b } if !(a > 0.0 && a.is_finite() && b.is_finite()) => {
                Err(Error::InvalidParameter(format!("affine slope must be > 0, got a={a}, b={b}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            UtilityFunction::Linear => "linear",
            UtilityFunction::Power { .. } => "power",
            UtilityFunction::Log => "log",
            UtilityFunction::Affine { .. } => "affine",
        }
    }

    /// Positive affine in the reward (so it induces the same preferences as `Linear`).
    pub fn is_affine(&self) -> bool {
        matches!(self, UtilityFunction::Linear | UtilityFunction::Affine { .. })
            || matches!(self, UtilityFunction::Power { c } if *c == 1.0)
    }

    pub fn apply(&self, r: f64) -> Result<f64> {
        self.check_parameters()?;
        match *self {
            UtilityFunction::Linear => Ok(r),
            UtilityFunction::Power { c } => {
                if r < 0.0 {
                    Err(Error::Domain { utility: "power", argument: r })
                } else {
                    Ok(pow(r, c))
                }
            }
            UtilityFunction::Log => {
                if r > 0.0 {
                    Ok(log(r))
                } else {
                    Err(Error::Domain { utility: "log", argument: r })
                }
            }
            UtilityFunction::Affine { a, b } => Ok(a * r + b),
        }
    }

    pub fn apply_all(&self, rewards: &[f64]) -> Result<alloc::vec::Vec<f64>> {
        rewards.iter().map(|&r| self.apply(r)).collect()
    }
}

impl fmt::Display for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilityFunction::Linear => write!(f, "linear"),
            UtilityFunction::Power { c } => write!(f, "power(c={c})"),
            UtilityFunction::Log => write!(f, "log"),
            UtilityFunction::Affine { a, b } => write!(f, "affine(a={a},b={b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((UtilityFunction::power(2.0).unwrap().apply(1.5).unwrap() - 2.25).abs() < 1e-15);
        assert_eq!(UtilityFunction::Linear.apply(7.0).unwrap(), 7.0);
        assert!((UtilityFunction::Log.apply(4.0).unwrap() - 1.386_294_361_119_890_6).abs() < 1e-15);
        assert_eq!(UtilityFunction::affine(2.0, 1.0).unwrap().apply(3.0).unwrap(), 7.0);
        assert_eq!(UtilityFunction::power(0.5).unwrap().apply(0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(UtilityFunction::Log.apply(0.0), Err(Error::Domain { .. })));
        assert!(matches!(UtilityFunction::Log.apply(-1.0), Err(Error::Domain { .. })));
        assert!(matches!(UtilityFunction::power(0.5).unwrap().apply(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn parameter_checks() {
        assert!(UtilityFunction::power(0.0).is_err());
        assert!(UtilityFunction::affine(-1.0, 0.0).is_err());
        assert!(UtilityFunction::Power { c: -2.0 }.apply(1.0).is_err());
    }
}
