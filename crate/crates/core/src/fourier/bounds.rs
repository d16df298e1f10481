//! Remainder bounds from the smoothing argument, evaluated at their optimal
//! smoothing scale.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::serialize_f64;

/// An optimized bound `smoothing + oscillation`, normalized by `N^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RemainderBound {
    #[serde(serialize_with = "serialize_f64")]
    pub delta_star: f64,
    /// The smoothing error term, equal to `delta_star`.
    #[serde(serialize_with = "serialize_f64")]
    pub smoothing: f64,
    /// The Fourier-side term at `delta_star`, including the `ε` loss.
    #[serde(serialize_with = "serialize_f64")]
    pub oscillation: f64,
    /// `delta_star * N^ε`, the normalized remainder bound.
    #[serde(serialize_with = "serialize_f64")]
    pub bound: f64,
    /// Exponent `e` with `|R| ≤ C N^e` at the count level.
    #[serde(serialize_with = "serialize_f64")]
    pub count_exponent: f64,
}

fn check(gamma: f64, n: u64, eps: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::param(
            "gamma",
            format!("need 0 <= gamma <= 1/2, got {gamma}"),
        ));
    }
    if n < 2 {
        return Err(Error::param("n", "need N >= 2"));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", "must be finite and nonnegative"));
    }
    Ok(())
}

/// Annulus bound `δ + N^{-2γ} δ^{-(d-1)/2 - 2ε}` at `δ* = N^{-4γ/(d+1)}`.
pub fn theorem1_remainder_bound(gamma: f64, d: usize, n: u64, eps: f64) -> Result<RemainderBound> {
    check(gamma, n, eps)?;
    if d < 2 {
        return Err(Error::param("d", "need d >= 2"));
    }
    let nf = n as f64;
    let rate = 4.0 * gamma / (d as f64 + 1.0);
    let delta_star = nf.powf(-rate);
    let oscillation = nf.powf(-2.0 * gamma) * delta_star.powf(-(d as f64 - 1.0) / 2.0 - 2.0 * eps);
    Ok(RemainderBound {
        delta_star,
        smoothing: delta_star,
        oscillation,
        bound: nf.powf(-rate + eps),
        count_exponent: 2.0 - rate + eps,
    })
}

/// Slab bound `δ + δ^{-ε} N^{-γ}` at `δ* = N^{-γ}`.
pub fn theorem2_remainder_bound(gamma: f64, n: u64, eps: f64) -> Result<RemainderBound> {
    check(gamma, n, eps)?;
    let nf = n as f64;
    let delta_star = nf.powf(-gamma);
    Ok(RemainderBound {
        delta_star,
        smoothing: delta_star,
        oscillation: delta_star.powf(-eps) * nf.powf(-gamma),
        bound: nf.powf(-gamma + eps),
        count_exponent: 2.0 - gamma + eps,
    })
}
