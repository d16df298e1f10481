//! Points on the flat torus `R^d / Z^d`, their sequences, and the torus metric.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::unit_ball_volume;

/// Reduces a real number to its canonical representative in `[0, 1)`.
#[inline]
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `t` to the nearest integer, in `[0, 1/2]`.
#[inline]
pub fn wrap_delta(t: f64) -> f64 {
    let u = t.abs();
    let u = u - u.floor();
    u.min(1.0 - u)
}

/// A point of the torus, stored by its representative in `[0, 1)^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, reducing every coordinate mod 1.
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coords = coords.into();
        if coords.is_empty() {
            return Err(Error::param(
                "coords",
                "a point needs at least one coordinate",
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("coords", "coordinates must be finite"));
        }
        for c in coords.iter_mut() {
            *c = wrap_unit(*c);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Which distance a count or statistic is taken in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Torus,
    /// Euclidean distance between the cube representatives.
    Euclidean,
}

/// Flat-torus distance `min_{m ∈ Z^d} |x - y - m|`.
pub fn torus_distance(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    Ok(torus_distance_raw(x.coords(), y.coords()))
}

pub fn euclidean_distance(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    Ok(euclidean_distance_raw(x.coords(), y.coords()))
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::Dimension { left, right })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn torus_distance_sq_raw(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let t = wrap_delta(a - b);
            t * t
        })
        .sum()
}

#[inline]
pub(crate) fn torus_distance_raw(x: &[f64], y: &[f64]) -> f64 {
    torus_distance_sq_raw(x, y).sqrt()
}

#[inline]
pub(crate) fn euclidean_distance_raw(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub(crate) fn distance_raw(metric: Metric, x: &[f64], y: &[f64]) -> f64 {
    match metric {
        Metric::Torus => torus_distance_raw(x, y),
        Metric::Euclidean => euclidean_distance_raw(x, y),
    }
}

/// Lebesgue measure of `{x ∈ T^d : a ≤ ‖x‖ ≤ b}`.
///
/// Requires `b < 1/2` so torus balls are Euclidean balls.
pub fn annulus_volume(a: f64, b: f64, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::param("d", "dimension must be at least 1"));
    }
    if !(a >= 0.0 && a <= b) {
        return Err(Error::param(
            "a",
            format!("need 0 <= a <= b, got a={a}, b={b}"),
        ));
    }
    if b >= 0.5 {
        return Err(Error::param(
            "b",
            format!("radius {b} >= 1/2: torus ball is no longer Euclidean"),
        ));
    }
    let w = unit_ball_volume(d);
    Ok(w * b.powi(d as i32) - w * a.powi(d as i32))
}

/// Where a sequence came from; enough to regenerate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    /// Identifier of the pseudo-random algorithm, when one was used.
    pub rng: Option<String>,
}

impl Provenance {
    pub fn new(family: impl Into<String>, seed: u64) -> Self {
        Self {
            family: family.into(),
            params: BTreeMap::new(),
            seed,
            rng: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_rng(mut self, id: &str) -> Self {
        self.rng = Some(id.to_string());
        self
    }
}

/// An ordered list of torus points of common dimension.
///
/// Coordinates are stored flat, point after point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSequence {
    dim: usize,
    data: Vec<f64>,
    provenance: Provenance,
}

impl PointSequence {
    /// Builds a sequence from flat coordinates, reducing each mod 1.
    pub fn from_flat(dim: usize, mut data: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "dimension must be at least 1"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::param(
                "data",
                format!(
                    "{} coordinates do not split into points of dim {dim}",
                    data.len()
                ),
            ));
        }
        if data.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("data", "coordinates must be finite"));
        }
        for c in data.iter_mut() {
            *c = wrap_unit(*c);
        }
        Ok(Self {
            dim,
            data,
            provenance,
        })
    }

    pub fn from_points(points: &[Point], provenance: Provenance) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::param("points", "sequence must not be empty"))?;
        let mut data = Vec::with_capacity(points.len() * dim);
        for p in points {
            check_dims(dim, p.dim())?;
            data.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, data, provenance)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Coordinates of point `i` (0-based).
    #[inline]
    pub fn coords(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> Point {
        Point {
            coords: self.coords(i).to_vec(),
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.data
    }

    /// Errors unless the first `n` points exist.
    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.len() {
            Err(Error::Range {
                requested: n,
                available: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// The sequence in reverse order (same provenance).
    pub fn reversed(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for p in self.data.chunks_exact(self.dim).rev() {
            data.extend_from_slice(p);
        }
        Self {
            dim: self.dim,
            data,
            provenance: self.provenance.clone(),
        }
    }
}

/// The region of a pair count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionSpec {
    /// Pairs with `a ≤ dist(x, y) ≤ b`.
    Annulus {
        a: f64,
        b: f64,
        #[serde(default)]
        metric: Metric,
    },
    /// Pairs with `a ≤ x · y ≤ b`, weighted by the fixed bump `ψ(x) ψ(y)`.
    Slab { a: f64, b: f64 },
}

/// Smallest inner radius the annulus counts accept.
pub const MIN_INNER_RADIUS: f64 = 0.01;

impl RegionSpec {
    pub fn annulus(a: f64, b: f64) -> Result<Self> {
        let r = RegionSpec::Annulus {
            a,
            b,
            metric: Metric::Torus,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn slab(a: f64, b: f64) -> Result<Self> {
        let r = RegionSpec::Slab { a, b };
        r.validate()?;
        Ok(r)
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            RegionSpec::Annulus { a, b, .. } | RegionSpec::Slab { a, b } => (a, b),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RegionSpec::Annulus { .. } => "annulus",
            RegionSpec::Slab { .. } => "slab",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.bounds();
        if !(a.is_finite() && b.is_finite() && a > 0.0 && a <= b) {
            return Err(Error::param(
                "region",
                format!("need 0 < a <= b, got [{a}, {b}]"),
            ));
        }
        if let RegionSpec::Annulus {
            metric: Metric::Torus,
            ..
        } = self
        {
            if b >= 0.5 {
                return Err(Error::param(
                    "region",
                    format!("torus annulus needs b < 1/2, got {b}"),
                ));
            }
        }
        Ok(())
    }

    /// Validation for the annulus-count experiments, which need `a ≥ 1/100`.
    pub fn validate_for_counting(&self) -> Result<()> {
        self.validate()?;
        let (a, _) = self.bounds();
        if a < MIN_INNER_RADIUS {
            return Err(Error::param(
                "region",
                format!("lower endpoint must be at least {MIN_INNER_RADIUS}, got {a}"),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.bounds();
        write!(f, "{}:{a}:{b}", self.kind())
    }
}

impl std::str::FromStr for RegionSpec {
    type Err = Error;

    /// Parses `annulus:<a>:<b>` or `slab:<a>:<b>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || {
            Error::Parse(format!(
                "region `{s}`: expected annulus:<a>:<b> or slab:<a>:<b>"
            ))
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        match parts[0].trim() {
            "annulus" => RegionSpec::annulus(a, b),
            "slab" => RegionSpec::slab(a, b),
            _ => Err(bad()),
        }
    }
}
