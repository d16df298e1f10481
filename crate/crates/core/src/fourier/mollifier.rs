//! The periodized bump `ρ_δ` on the torus.
//!
//! `ρ_δ(x) = δ^{-d} Σ_{m ∈ Z^d} ρ((x - m)/δ) = Σ_k e^{2πi k·x} ρ̂(δk)`.
//! The spatial side evaluates the left sum over the few shifts that reach
//! the support; the Fourier side evaluates a truncated right sum with `ρ̂`
//! obtained from the bump's one-dimensional projection.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::numeric::{composite_gauss_legendre, unit_sphere_area};

/// Steepness `s` of the base profile `exp(-s / (1 - |x|^2))`.
///
/// Larger values move the bump's Fourier decay into its asymptotic regime
/// earlier, so the series side converges with fewer terms.
pub const STEEPNESS: f64 = 4.0;

/// How the mollifier is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Direct sum over lattice shifts.
    Spatial,
    /// Fourier series truncated to `|k|_∞ ≤ truncation`.
    FourierSeries { truncation: usize },
}

#[inline]
fn raw_profile(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-STEEPNESS / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Integral of the unnormalized profile over `R^d`.
fn raw_mass(dim: usize) -> f64 {
    let rule = composite_gauss_legendre(0.0, 1.0, 32, 24);
    let radial: f64 = rule
        .iter()
        .map(|&(r, w)| w * r.powi(dim as i32 - 1) * raw_profile(r * r))
        .sum();
    unit_sphere_area(dim) * radial
}

/// Integral of the unnormalized profile over the hyperplane `x_1 = t`.
fn raw_projection(dim: usize, t: f64) -> f64 {
    if dim == 1 {
        return raw_profile(t * t);
    }
    let w2 = 1.0 - t * t;
    if w2 <= 0.0 {
        return 0.0;
    }
    let rule = composite_gauss_legendre(0.0, w2.sqrt(), 8, 24);
    let inner: f64 = rule
        .iter()
        .map(|&(u, w)| w * u.powi(dim as i32 - 2) * raw_profile(t * t + u * u))
        .sum();
    unit_sphere_area(dim - 1) * inner
}

/// Smooth approximate identity on `T^d` at scale `delta`.
#[derive(Clone, Debug)]
pub struct Mollifier {
    dim: usize,
    delta: f64,
    inv_mass: f64,
    /// Quadrature nodes `t ∈ [0, 1]` paired with `2 w P(t) / mass`.
    projection: Vec<(f64, f64)>,
}

impl Mollifier {
    pub fn new(dim: usize, delta: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be at least 1"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(
                "delta",
                format!("need 0 < delta < 1, got {delta}"),
            ));
        }
        let inv_mass = 1.0 / raw_mass(dim);
        let projection = composite_gauss_legendre(0.0, 1.0, 256, 24)
            .into_iter()
            .map(|(t, w)| (t, 2.0 * w * raw_projection(dim, t) * inv_mass))
            .collect();
        Ok(Self {
            dim,
            delta,
            inv_mass,
            projection,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The unit-mass base profile `ρ` at radius `r`.
    pub fn base_profile(&self, r: f64) -> f64 {
        raw_profile(r * r) * self.inv_mass
    }

    /// Lower bound `c` of `ρ` on the ball of radius 1/2.
    pub fn floor(&self) -> f64 {
        self.base_profile(0.5)
    }

    /// `ρ̂(ξ)` at radial frequency `s = |ξ|`.
    ///
    /// Computed as the cosine transform of the projection of `ρ` onto a line,
    /// accurate for `s` up to a few hundred.
    pub fn base_transform(&self, s: f64) -> f64 {
        let w = std::f64::consts::TAU * s;
        self.projection
            .iter()
            .map(|&(t, wp)| wp * (w * t).cos())
            .sum()
    }

    /// Fourier coefficient `ρ̂_δ(k) = ρ̂(δ k)`.
    pub fn coefficient(&self, k: &[i64]) -> f64 {
        let s = k.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        self.base_transform(self.delta * s)
    }

    pub fn value(&self, x: &Point, mode: EvalMode) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::Dimension {
                left: self.dim,
                right: x.dim(),
            });
        }
        match mode {
            EvalMode::Spatial => Ok(self.spatial(x.coords())),
            EvalMode::FourierSeries { truncation } => {
                if truncation == 0 {
                    return Err(Error::param("truncation", "must be at least 1"));
                }
                Ok(self.series_with(&SeriesTable::new(self, truncation), x.coords()))
            }
        }
    }

    /// Spatial periodization: sums over every shift `m` with `|x - m| < δ`.
    pub fn spatial(&self, x: &[f64]) -> f64 {
        let d = self.dim;
        let lo: Vec<i64> = x.iter().map(|c| (c - self.delta).floor() as i64).collect();
        let hi: Vec<i64> = x.iter().map(|c| (c + self.delta).ceil() as i64).collect();
        let mut m = lo.clone();
        let mut total = 0.0;
        let scale = self.delta.powi(-(d as i32));
        loop {
            let r2: f64 = x
                .iter()
                .zip(&m)
                .map(|(c, &mi)| {
                    let u = (c - mi as f64) / self.delta;
                    u * u
                })
                .sum();
            total += scale * raw_profile(r2) * self.inv_mass;
            // Odometer over the box of shifts.
            let mut j = 0;
            loop {
                if j == d {
                    return total;
                }
                m[j] += 1;
                if m[j] <= hi[j] {
                    break;
                }
                m[j] = lo[j];
                j += 1;
            }
        }
    }

    /// Truncated Fourier series using a precomputed coefficient table.
    pub fn series_with(&self, table: &SeriesTable, x: &[f64]) -> f64 {
        let t = table.truncation as i64;
        let d = self.dim;
        let side = (2 * t + 1) as usize;
        // Per-axis phases e^{2πi k x_j}, k = -T..T.
        let phases: Vec<Vec<(f64, f64)>> = x
            .iter()
            .map(|&c| {
                (-t..=t)
                    .map(|k| {
                        let z = crate::numeric::unit_phase(k as f64 * c);
                        (z.re, z.im)
                    })
                    .collect()
            })
            .collect();
        let mut sum = crate::numeric::CompensatedSum::new();
        let mut idx = vec![0usize; d];
        loop {
            // Product of the axis phases, and |k|^2.
            let (mut re, mut im) = (1.0, 0.0);
            let mut m2 = 0usize;
            for j in 0..d {
                let (c, s) = phases[j][idx[j]];
                (re, im) = (re * c - im * s, re * s + im * c);
                let k = idx[j] as i64 - t;
                m2 += (k * k) as usize;
            }
            sum.add(table.by_norm_sq[m2] * re);
            let mut j = 0;
            loop {
                if j == d {
                    return sum.value();
                }
                idx[j] += 1;
                if idx[j] < side {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// Smallest truncation whose neglected coefficients sum to at most `tol`,
    /// estimated from the radial tail `δ^{-d} |S^{d-1}| ∫_s^∞ r^{d-1} |ρ̂(r)| dr`.
    pub fn suggested_truncation(&self, tol: f64) -> usize {
        let h = 0.05;
        let smax = 200.0;
        let steps = (smax / h) as usize;
        let area = unit_sphere_area(self.dim);
        let dens: Vec<f64> = (0..=steps)
            .map(|i| {
                let s = i as f64 * h;
                area * s.powi(self.dim as i32 - 1) * self.base_transform(s).abs()
            })
            .collect();
        let scale = self.delta.powi(-(self.dim as i32));
        let mut tail = 0.0;
        let mut cut = smax;
        for i in (1..=steps).rev() {
            tail += 0.5 * h * (dens[i] + dens[i - 1]);
            if scale * tail > tol {
                cut = i as f64 * h;
                break;
            }
        }
        (cut / self.delta).ceil() as usize
    }
}

/// Coefficients `ρ̂(δ|k|)` for `|k|_∞ ≤ truncation`, indexed by `|k|^2`.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    truncation: usize,
    by_norm_sq: Vec<f64>,
}

impl SeriesTable {
    pub fn new(m: &Mollifier, truncation: usize) -> Self {
        let t = truncation;
        let max = m.dim * t * t;
        // Mark which |k|^2 values occur in the box.
        let mut seen = vec![false; max + 1];
        seen[0] = true;
        for _ in 0..m.dim {
            let prev = seen.clone();
            for (v, &p) in prev.iter().enumerate() {
                if p {
                    for k in 1..=t {
                        let w = v + k * k;
                        if w > max {
                            break;
                        }
                        seen[w] = true;
                    }
                }
            }
        }
        let smax = m.delta * (max as f64).sqrt();
        let interp = ChebyshevTable::new(|s| m.base_transform(s), smax);
        let by_norm_sq = seen
            .iter()
            .enumerate()
            .map(|(v, &s)| {
                if s {
                    interp.eval(m.delta * (v as f64).sqrt())
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            truncation,
            by_norm_sq,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }
}

/// Piecewise Chebyshev interpolant of a smooth function on `[0, hi]`.
struct ChebyshevTable {
    width: f64,
    coeffs: Vec<[f64; CHEB_ORDER]>,
}

const CHEB_ORDER: usize = 24;
const CHEB_WIDTH: f64 = 0.25;

impl ChebyshevTable {
    fn new(f: impl Fn(f64) -> f64, hi: f64) -> Self {
        let n = CHEB_ORDER;
        let panels = ((hi / CHEB_WIDTH).ceil() as usize).max(1);
        let nodes: Vec<f64> = (0..n)
            .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
            .collect();
        let coeffs = (0..panels)
            .map(|p| {
                let lo = p as f64 * CHEB_WIDTH;
                let vals: Vec<f64> = nodes
                    .iter()
                    .map(|&u| f(lo + 0.5 * CHEB_WIDTH * (u + 1.0)))
                    .collect();
                let mut c = [0.0; CHEB_ORDER];
                for (k, ck) in c.iter_mut().enumerate() {
                    let s: f64 = vals
                        .iter()
                        .enumerate()
                        .map(|(j, v)| {
                            v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64)
                                .cos()
                        })
                        .sum();
                    *ck = 2.0 * s / n as f64;
                }
                c[0] *= 0.5;
                c
            })
            .collect();
        Self {
            width: CHEB_WIDTH,
            coeffs,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let p = ((x / self.width) as usize).min(self.coeffs.len() - 1);
        let u = 2.0 * (x - p as f64 * self.width) / self.width - 1.0;
        // Clenshaw recurrence.
        let c = &self.coeffs[p];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c[1..].iter().rev() {
            (b1, b2) = (2.0 * u * b1 - b2 + ck, b1);
        }
        c[0] + u * b1 - b2
    }
}
