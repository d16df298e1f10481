//! Mollifier, radial Fourier transforms, and the optimized remainder bounds.

pub mod bessel;
mod bounds;
mod mollifier;
mod transforms;

pub use bounds::{theorem1_remainder_bound, theorem2_remainder_bound, RemainderBound};
pub use mollifier::{EvalMode, Mollifier, SeriesTable, STEEPNESS};
pub use transforms::{
    annulus_fourier, ball_fourier, decay_fit, radiality_defect, sphere_measure_fourier, DecayFit,
    DecaySample, RadialTransform, TransformKind,
};

use crate::geometry::Point;

fn phi(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff `Π φ((x_i - 1/2) / 0.4)`, equal to 1 at the cube's center
/// and supported in `[0.1, 0.9]^d`.
pub fn bump_psi(x: &Point) -> f64 {
    bump_psi_raw(x.coords())
}

pub(crate) fn bump_psi_raw(x: &[f64]) -> f64 {
    x.iter().map(|&c| phi((c - 0.5) / 0.4)).product()
}

/// Evaluates `ρ_δ` at `x`; see [`Mollifier::value`].
pub fn mollifier_value(m: &Mollifier, x: &Point, mode: EvalMode) -> crate::Result<f64> {
    m.value(x, mode)
}
