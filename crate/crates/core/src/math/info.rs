use libm::log;

use super::{CategoricalDist, Nats};
use crate::error::check_len;
use crate::{Error, Result};

/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * log(x)
    } else {
        0.0
    }
}

/// Shannon entropy `-Σ pᵢ ln pᵢ`.
pub fn entropy(p: &CategoricalDist) -> Nats {
    // `0.0 - s` rather than `-s` so a degenerate distribution gives +0.
    Nats(0.0 - p.probs().iter().map(|&x| xlogx(x)).sum::<f64>())
}

/// `D_KL[p ‖ q] = Σ pᵢ ln(pᵢ/qᵢ)`, skipping entries with `pᵢ = 0`.
///
/// Fails with [`Error::AbsoluteContinuityViolation`] when `p` puts mass where
/// `q` has none.
pub fn kl_divergence(p: &CategoricalDist, q: &CategoricalDist) -> Result<Nats> {
    kl_slices(p.probs(), q.probs()).map(Nats)
}

/// Same as [`kl_divergence`] but maps a support violation to `+inf`.
pub fn kl_divergence_or_infinite(p: &CategoricalDist, q: &CategoricalDist) -> Result<Nats> {
    match kl_divergence(p, q) {
        Err(Error::AbsoluteContinuityViolation { .. }) => Ok(Nats::INFINITY),
        other => other,
    }
}

pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    check_len(p.len(), q.len())?;
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation { index: i });
            }
            acc += pi * (log(pi) - log(qi));
        }
    }
    Ok(acc)
}

/// `-Σ pᵢ ln qᵢ`.
pub fn cross_entropy(p: &CategoricalDist, q: &CategoricalDist) -> Result<Nats> {
    check_len(p.len(), q.len())?;
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation { index: i });
            }
            acc -= pi * log(qi);
        }
    }
    Ok(Nats(acc))
}

/// `Σ pᵢ vᵢ`. Entries with zero probability are skipped, so infinite values
/// off the support do not poison the sum.
pub fn expectation(p: &CategoricalDist, values: &[f64]) -> Result<f64> {
    check_len(p.len(), values.len())?;
    Ok(p.probs().iter().zip(values).filter(|(pi, _)| **pi > 0.0).map(|(pi, v)| pi * v).sum())
}
