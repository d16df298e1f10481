//! Fourier transforms of radial sets and measures in `R^2` and `R^3`, and
//! log-log decay fits of their magnitudes.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::bessel::{j0, j1};
use crate::error::{Error, Result};
use crate::numeric::{fmt17, serialize_f64, LinearFit};

/// Which radial object is transformed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    AnnulusIndicator {
        a: f64,
        b: f64,
    },
    BallIndicator {
        r: f64,
    },
    /// Surface measure of the sphere of radius `r`, normalized to unit mass.
    SphereMeasure {
        r: f64,
    },
}

/// A radial function's transform `ξ ↦ ∫ f(x) e^{-2πi ξ·x} dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialTransform {
    pub kind: TransformKind,
    pub dim: usize,
}

const MIN_RADIUS: f64 = 0.01;

fn check_radius(name: &'static str, r: f64) -> Result<()> {
    if !(MIN_RADIUS..=0.5).contains(&r) {
        return Err(Error::param(
            name,
            format!("need 1/100 <= {name} <= 1/2, got {r}"),
        ));
    }
    Ok(())
}

impl RadialTransform {
    pub fn new(kind: TransformKind, dim: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::param(
                "d",
                format!("closed forms exist for d = 2, 3 only, got {dim}"),
            ));
        }
        match kind {
            TransformKind::AnnulusIndicator { a, b } => {
                check_radius("a", a)?;
                if !(a < b && b < 0.5) {
                    return Err(Error::param(
                        "b",
                        format!("need a < b < 1/2, got a={a}, b={b}"),
                    ));
                }
            }
            TransformKind::BallIndicator { r } => check_radius("r", r)?,
            TransformKind::SphereMeasure { r } => check_radius("r", r)?,
        }
        Ok(Self { kind, dim })
    }

    /// Transform at a frequency vector; only `|k|` matters.
    pub fn at(&self, k: &[i64]) -> Result<f64> {
        if k.len() != self.dim {
            return Err(Error::Dimension {
                left: self.dim,
                right: k.len(),
            });
        }
        let m: i64 = k.iter().map(|&x| x * x).sum();
        Ok(self.radial((m as f64).sqrt()))
    }

    /// Transform at radial frequency `s = |ξ| ≥ 0`.
    pub fn radial(&self, s: f64) -> f64 {
        match self.kind {
            TransformKind::AnnulusIndicator { a, b } => ball(self.dim, b, s) - ball(self.dim, a, s),
            TransformKind::BallIndicator { r } => ball(self.dim, r, s),
            TransformKind::SphereMeasure { r } => {
                let x = 2.0 * PI * r * s;
                match self.dim {
                    2 => j0(x),
                    _ => sinc(x),
                }
            }
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Transform of the ball of radius `r` at radial frequency `s`.
fn ball(dim: usize, r: f64, s: f64) -> f64 {
    let x = 2.0 * PI * r * s;
    match dim {
        // r J_1(2πrs) / s, written as πr^2 · 2J_1(x)/x.
        2 => {
            let jinc = if x.abs() < 1e-6 {
                1.0 - x * x / 8.0
            } else {
                2.0 * j1(x) / x
            };
            PI * r * r * jinc
        }
        // (sin x - x cos x) / (2π^2 s^3) = 4π r^3 (sin x - x cos x) / x^3.
        _ => {
            let g = if x.abs() < 0.1 {
                let x2 = x * x;
                1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0
            } else {
                (x.sin() - x * x.cos()) / (x * x * x)
            };
            4.0 * PI * r * r * r * g
        }
    }
}

pub fn annulus_fourier(a: f64, b: f64, d: usize, k: &[i64]) -> Result<f64> {
    RadialTransform::new(TransformKind::AnnulusIndicator { a, b }, d)?.at(k)
}

pub fn ball_fourier(r: f64, d: usize, k: &[i64]) -> Result<f64> {
    RadialTransform::new(TransformKind::BallIndicator { r }, d)?.at(k)
}

pub fn sphere_measure_fourier(r: f64, d: usize, k: &[i64]) -> Result<f64> {
    RadialTransform::new(TransformKind::SphereMeasure { r }, d)?.at(k)
}

/// One sample of a decay check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecaySample {
    pub modulus: f64,
    pub value: f64,
}

/// Log-log fit of `|f̂(k)|` against `|k|` over lattice frequencies.
#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    #[serde(serialize_with = "serialize_f64")]
    pub slope: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub intercept: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub r_squared: f64,
    pub range: [f64; 2],
    #[serde(skip)]
    pub samples: Vec<DecaySample>,
}

/// Samples the transform at every attainable lattice modulus `|k| = √m` with
/// `lo ≤ |k| ≤ hi` and fits a line to `log |value|` against `log |k|`.
///
/// Samples whose magnitude falls below `1e-12` of the largest are exact
/// zeros up to rounding and are left out of the fit (but kept in `samples`).
pub fn decay_fit(t: &RadialTransform, lo: f64, hi: f64) -> Result<DecayFit> {
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::param(
            "range",
            format!("need 0 < lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let m_lo = (lo * lo).ceil() as usize;
    let m_hi = (hi * hi).floor() as usize;
    let reachable = sums_of_squares(t.dim, m_hi);
    let samples: Vec<DecaySample> = (m_lo..=m_hi)
        .filter(|&m| reachable[m])
        .map(|m| {
            let modulus = (m as f64).sqrt();
            DecaySample {
                modulus,
                value: t.radial(modulus),
            }
        })
        .collect();
    let peak = samples.iter().map(|s| s.value.abs()).fold(0.0, f64::max);
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.value.abs() >= 1e-12 * peak && s.value != 0.0)
        .map(|s| (s.modulus, s.value.abs()))
        .unzip();
    let fit = LinearFit::fit_log_log(&xs, &ys)?;
    Ok(DecayFit {
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        range: [lo, hi],
        samples,
    })
}

/// Marks every `m ≤ max` that is a sum of `dim` integer squares.
fn sums_of_squares(dim: usize, max: usize) -> Vec<bool> {
    let mut reach = vec![false; max + 1];
    reach[0] = true;
    for _ in 0..dim {
        let prev = reach.clone();
        for (v, _) in prev.iter().enumerate().filter(|(_, &p)| p) {
            let mut k = 1;
            while v + k * k <= max {
                reach[v + k * k] = true;
                k += 1;
            }
        }
    }
    reach
}

impl DecayFit {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "|k|,value,abs_value")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{}",
                fmt17(s.modulus),
                fmt17(s.value),
                fmt17(s.value.abs())
            )?;
        }
        Ok(())
    }
}

/// Largest deviation between transforms at distinct vectors of equal modulus.
///
/// Probes every vector in the box `|k|_∞ ≤ kmax` against the first vector
/// seen with the same `|k|^2`.
pub fn radiality_defect(t: &RadialTransform, kmax: i64) -> Result<f64> {
    let mut first: std::collections::HashMap<i64, f64> = Default::default();
    let mut worst = 0.0f64;
    let side = 2 * kmax + 1;
    let count = side.pow(t.dim as u32);
    for idx in 0..count {
        let mut rest = idx;
        let k: Vec<i64> = (0..t.dim)
            .map(|_| {
                let c = rest % side - kmax;
                rest /= side;
                c
            })
            .collect();
        let v = t.at(&k)?;
        let m: i64 = k.iter().map(|x| x * x).sum();
        let f = *first.entry(m).or_insert(v);
        worst = worst.max((f - v).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::annulus_volume;
    use crate::numeric::composite_gauss_legendre;
    use approx::assert_relative_eq;

    #[test]
    fn zero_frequency_is_volume_or_mass() {
        let v = annulus_fourier(0.25, 0.30, 2, &[0, 0]).unwrap();
        assert_relative_eq!(v, 0.086_393_797_973_719_3, epsilon = 1e-12);
        assert_relative_eq!(v, annulus_volume(0.25, 0.30, 2).unwrap(), epsilon = 1e-15);
        let v3 = annulus_fourier(0.25, 0.45, 3, &[0, 0, 0]).unwrap();
        assert_relative_eq!(v3, annulus_volume(0.25, 0.45, 3).unwrap(), epsilon = 1e-14);
        assert_eq!(sphere_measure_fourier(0.3, 2, &[0, 0]).unwrap(), 1.0);
        assert_eq!(sphere_measure_fourier(0.3, 3, &[0, 0, 0]).unwrap(), 1.0);
    }

    #[test]
    fn sphere_zero_at_half_period() {
        assert!(sphere_measure_fourier(0.25, 3, &[2, 0, 0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn three_dimensional_closed_form() {
        let s = 10.0;
        let f = |r: f64| {
            let x = 2.0 * PI * r * s;
            (x.sin() - x * x.cos()) / (2.0 * PI * PI * s * s * s)
        };
        let v = annulus_fourier(0.25, 0.45, 3, &[6, 8, 0]).unwrap();
        assert_relative_eq!(v, f(0.45) - f(0.25), epsilon = 1e-14);
    }

    /// Spherical-coordinate quadrature of `∫_{a≤|x|≤b} cos(2π s x_1) dx`.
    fn annulus_quadrature(d: usize, a: f64, b: f64, s: f64) -> f64 {
        let radial = composite_gauss_legendre(a, b, 64, 16);
        let angular = composite_gauss_legendre(0.0, PI, 64, 16);
        radial
            .iter()
            .map(|&(r, wr)| {
                let shell: f64 = angular
                    .iter()
                    .map(|&(th, wt)| {
                        let jac = if d == 2 { 2.0 } else { 2.0 * PI * th.sin() };
                        wt * jac * (2.0 * PI * s * r * th.cos()).cos()
                    })
                    .sum();
                wr * r.powi(d as i32 - 1) * shell
            })
            .sum()
    }

    #[test]
    fn matches_quadrature_oracle() {
        for (d, k) in [
            (2usize, vec![6i64, 8]),
            (2, vec![3, 1]),
            (3, vec![6, 0, 8]),
            (3, vec![1, 2, 2]),
        ] {
            let s = (k.iter().map(|x| x * x).sum::<i64>() as f64).sqrt();
            let v = annulus_fourier(0.25, 0.45, d, &k).unwrap();
            let q = annulus_quadrature(d, 0.25, 0.45, s);
            assert!((v - q).abs() < 1e-10, "d={d} k={k:?}: {v} vs {q}");
        }
    }

    #[test]
    fn decay_slopes() {
        for d in [2, 3] {
            let ann = RadialTransform::new(TransformKind::AnnulusIndicator { a: 0.25, b: 0.30 }, d)
                .unwrap();
            let fit = decay_fit(&ann, 4.0, 128.0).unwrap();
            assert!(
                fit.slope <= -(d as f64 + 1.0) / 2.0 + 0.1,
                "annulus d={d}: {}",
                fit.slope
            );
            let sph = RadialTransform::new(TransformKind::SphereMeasure { r: 0.25 }, d).unwrap();
            let fit = decay_fit(&sph, 4.0, 128.0).unwrap();
            assert!(
                fit.slope <= -(d as f64 - 1.0) / 2.0 + 0.1,
                "sphere d={d}: {}",
                fit.slope
            );
        }
    }

    #[test]
    fn radial_on_equal_moduli() {
        for d in [2, 3] {
            let t = RadialTransform::new(TransformKind::AnnulusIndicator { a: 0.1, b: 0.4 }, d)
                .unwrap();
            assert!(radiality_defect(&t, 10).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(annulus_fourier(0.25, 0.3, 4, &[1, 0, 0, 0]).is_err());
        assert!(annulus_fourier(0.005, 0.3, 2, &[1, 0]).is_err());
        assert!(annulus_fourier(0.3, 0.3, 2, &[1, 0]).is_err());
        assert!(sphere_measure_fourier(0.6, 3, &[1, 0, 0]).is_err());
        assert!(sphere_measure_fourier(0.3, 3, &[1, 0]).is_err());
    }

    #[test]
    fn csv_header() {
        let t = RadialTransform::new(TransformKind::SphereMeasure { r: 0.25 }, 2).unwrap();
        let fit = decay_fit(&t, 4.0, 8.0).unwrap();
        let mut buf = Vec::new();
        fit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("|k|,value,abs_value\n"));
        assert_eq!(text.lines().count(), fit.samples.len() + 1);
    }
}
