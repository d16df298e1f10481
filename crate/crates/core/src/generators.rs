//! Point-sequence families used as experimental subjects, and the
//! line-oriented text format sequences are stored in.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PointSequence, Provenance};
use crate::numeric::fmt17;
use crate::rng::{seeded_rng, seeded_uniform_stream, RNG_ID};

/// Golden-ratio conjugate, the default one-dimensional Kronecker step.
pub const GOLDEN_CONJUGATE: f64 = 0.618_033_988_749_894_9;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Independent uniform points.
    Iid,
    /// `{n α}` for `n = 1, 2, …`.
    Kronecker {
        #[serde(default)]
        alpha: Option<Vec<f64>>,
    },
    /// Radical inverses of `n = 1, 2, …` in coprime bases.
    Halton {
        #[serde(default)]
        bases: Option<Vec<u64>>,
    },
    /// The grid `{0, 1/L, …, (L-1)/L}^d` in lexicographic order, repeated.
    Lattice { side: usize },
    /// Two orthogonal circles in `R^4`, scaled into the cube.
    Lenz {
        #[serde(default)]
        per_circle: Option<usize>,
        #[serde(default = "default_lenz_scale")]
        scale: f64,
    },
    /// Points spread over a few tiny clusters.
    Clustered {
        #[serde(default = "default_clusters")]
        clusters: usize,
        #[serde(default = "default_cluster_radius")]
        radius: f64,
    },
}

fn default_lenz_scale() -> f64 {
    0.25
}
fn default_clusters() -> usize {
    4
}
fn default_cluster_radius() -> f64 {
    1e-3
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Iid => "iid",
            Family::Kronecker { .. } => "kronecker",
            Family::Halton { .. } => "halton",
            Family::Lattice { .. } => "lattice",
            Family::Lenz { .. } => "lenz",
            Family::Clustered { .. } => "clustered",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub family: Family,
    pub dim: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(family: Family, dim: usize, seed: u64) -> Self {
        Self { family, dim, seed }
    }

    pub fn iid(dim: usize, seed: u64) -> Self {
        Self::new(Family::Iid, dim, seed)
    }

    /// Same family and parameters, different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    /// Checks family parameters, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::config("dim", "must be at least 1"));
        }
        match &self.family {
            Family::Iid => {}
            Family::Kronecker { alpha } => {
                if let Some(alpha) = alpha {
                    if alpha.len() != self.dim {
                        return Err(Error::config(
                            "alpha",
                            format!("expected {} components, got {}", self.dim, alpha.len()),
                        ));
                    }
                    if alpha.iter().any(|a| !a.is_finite()) {
                        return Err(Error::config("alpha", "components must be finite"));
                    }
                } else if self.dim > PRIMES.len() {
                    return Err(Error::config(
                        "alpha",
                        format!("no default direction beyond dimension {}", PRIMES.len()),
                    ));
                }
            }
            Family::Halton { bases } => {
                let bases = match bases {
                    Some(b) => b.clone(),
                    None if self.dim <= PRIMES.len() => PRIMES[..self.dim].to_vec(),
                    None => {
                        return Err(Error::config(
                            "bases",
                            format!("no default bases beyond dimension {}", PRIMES.len()),
                        ))
                    }
                };
                if bases.len() != self.dim {
                    return Err(Error::config(
                        "bases",
                        format!("expected {} bases, got {}", self.dim, bases.len()),
                    ));
                }
                if bases.iter().any(|&b| b < 2) {
                    return Err(Error::config("bases", "every base must be at least 2"));
                }
                for (i, &x) in bases.iter().enumerate() {
                    for &y in &bases[i + 1..] {
                        if gcd(x, y) != 1 {
                            return Err(Error::config(
                                "bases",
                                format!("bases {x} and {y} are not coprime"),
                            ));
                        }
                    }
                }
            }
            Family::Lattice { side } => {
                if *side == 0 {
                    return Err(Error::config("side", "must be at least 1"));
                }
            }
            Family::Lenz { per_circle, scale } => {
                if self.dim != 4 {
                    return Err(Error::config(
                        "dim",
                        format!("lenz configuration lives in dimension 4, got {}", self.dim),
                    ));
                }
                if !(*scale > 0.0 && *scale <= 0.25) {
                    return Err(Error::config(
                        "scale",
                        format!("need 0 < scale <= 1/4, got {scale}"),
                    ));
                }
                if *per_circle == Some(0) {
                    return Err(Error::config("per_circle", "must be at least 1"));
                }
            }
            Family::Clustered { clusters, radius } => {
                if *clusters == 0 {
                    return Err(Error::config("clusters", "must be at least 1"));
                }
                if !(*radius >= 0.0 && *radius < 0.5) {
                    return Err(Error::config(
                        "radius",
                        format!("need 0 <= radius < 1/2, got {radius}"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn provenance(&self) -> Provenance {
        let p = Provenance::new(self.family.name(), self.seed);
        match &self.family {
            Family::Iid => p.with_rng(RNG_ID),
            Family::Kronecker { alpha } => match alpha {
                Some(a) => p.with_param("alpha", join(a.iter().map(|x| fmt17(*x)))),
                None => p.with_param("alpha", "default"),
            },
            Family::Halton { bases } => match bases {
                Some(b) => p.with_param("bases", join(b.iter())),
                None => p.with_param("bases", "default"),
            },
            Family::Lattice { side } => p.with_param("side", side),
            Family::Lenz { per_circle, scale } => {
                let p = p.with_param("scale", fmt17(*scale));
                match per_circle {
                    Some(m) => p.with_param("per_circle", m),
                    None => p,
                }
            }
            Family::Clustered { clusters, radius } => p
                .with_param("clusters", clusters)
                .with_param("radius", fmt17(*radius))
                .with_rng(RNG_ID),
        }
    }
}

fn join<T: std::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Default Kronecker direction: the golden-ratio conjugate for `d = 1`,
/// otherwise `(√2, √3, √5, …) mod 1`.
pub fn default_kronecker_alpha(dim: usize) -> Vec<f64> {
    if dim == 1 {
        vec![GOLDEN_CONJUGATE]
    } else {
        PRIMES[..dim]
            .iter()
            .map(|&p| {
                let s = (p as f64).sqrt();
                s - s.floor()
            })
            .collect()
    }
}

/// Radical inverse of `n` in base `b`.
pub fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while n > 0 {
        r += (n % base) as f64 * f;
        n /= base;
        f *= inv;
    }
    r
}

/// Generates the first `n` points of the configured family.
pub fn generate(config: &GeneratorConfig, n: usize) -> Result<PointSequence> {
    config.validate()?;
    if n == 0 {
        return Err(Error::config("n", "must be at least 1"));
    }
    let d = config.dim;
    let mut data = Vec::with_capacity(n * d);
    match &config.family {
        Family::Iid => {
            let mut stream = seeded_uniform_stream(config.seed, d);
            for _ in 0..n {
                stream.fill_next(&mut data);
            }
        }
        Family::Kronecker { alpha } => {
            let alpha = alpha.clone().unwrap_or_else(|| default_kronecker_alpha(d));
            for i in 1..=n {
                let t = i as f64;
                data.extend(alpha.iter().map(|a| t * a));
            }
        }
        Family::Halton { bases } => {
            let bases = bases.clone().unwrap_or_else(|| PRIMES[..d].to_vec());
            for i in 1..=n as u64 {
                data.extend(bases.iter().map(|&b| radical_inverse(i, b)));
            }
        }
        Family::Lattice { side } => {
            let side = *side;
            let cells = (side as u128).saturating_pow(d as u32);
            for i in 0..n as u128 {
                let mut idx = i % cells;
                let start = data.len();
                data.resize(start + d, 0.0);
                for c in (0..d).rev() {
                    data[start + c] = (idx % side as u128) as f64 / side as f64;
                    idx /= side as u128;
                }
            }
        }
        Family::Lenz { per_circle, scale } => {
            let m = match per_circle {
                Some(m) => {
                    if n != 2 * m {
                        return Err(Error::config(
                            "per_circle",
                            format!("{m} points per circle make {} points, requested {n}", 2 * m),
                        ));
                    }
                    *m
                }
                None => {
                    if !n.is_multiple_of(2) {
                        return Err(Error::config(
                            "n",
                            format!("lenz needs an even count, got {n}"),
                        ));
                    }
                    n / 2
                }
            };
            for plane in 0..2 {
                for j in 0..m {
                    let theta = std::f64::consts::TAU * j as f64 / m as f64;
                    let (s, c) = theta.sin_cos();
                    let mut p = [0.5; 4];
                    p[2 * plane] = 0.5 + scale * c;
                    p[2 * plane + 1] = 0.5 + scale * s;
                    data.extend_from_slice(&p);
                }
            }
        }
        Family::Clustered { clusters, radius } => {
            let mut rng = seeded_rng(config.seed, 0);
            let centers: Vec<f64> = (0..clusters * d).map(|_| rng.random::<f64>()).collect();
            for i in 0..n {
                let c = i % clusters;
                for k in 0..d {
                    let off = (2.0 * rng.random::<f64>() - 1.0) * radius;
                    data.push(centers[c * d + k] + off);
                }
            }
        }
    }
    PointSequence::from_flat(d, data, config.provenance())
}

/// Common distance between the two circles of the Lenz configuration
/// after scaling by `scale`.
pub fn lenz_cross_distance(scale: f64) -> f64 {
    std::f64::consts::SQRT_2 * scale
}

/// Writes a sequence: a header line, then one point per line.
pub fn write_sequence<W: Write>(seq: &PointSequence, mut out: W) -> Result<()> {
    let p = seq.provenance();
    writeln!(
        out,
        "# dim={} family={} seed={} n={}",
        seq.dim(),
        p.family,
        p.seed,
        seq.len()
    )?;
    let mut line = String::new();
    for pt in seq.iter() {
        line.clear();
        for (i, c) in pt.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&fmt17(*c));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a sequence written by [`write_sequence`].
pub fn read_sequence<R: BufRead>(input: R) -> Result<PointSequence> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty sequence file".into()))??;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse(format!("missing header line, got `{header}`")))?;
    let (mut dim, mut family, mut seed, mut count) = (None, None, 0u64, None);
    for field in header.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
        let bad = || Error::Parse(format!("bad header value `{field}`"));
        match k {
            "dim" => dim = Some(v.parse::<usize>().map_err(|_| bad())?),
            "family" => family = Some(v.to_string()),
            "seed" => seed = v.parse().map_err(|_| bad())?,
            "n" => count = Some(v.parse::<usize>().map_err(|_| bad())?),
            _ => {}
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("header lacks dim".into()))?;
    let mut data = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(
                tok.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("line {}: bad number `{tok}`", lineno + 2))
                })?,
            );
        }
        if data.len() - before != dim {
            return Err(Error::Parse(format!(
                "line {}: expected {dim} coordinates, got {}",
                lineno + 2,
                data.len() - before
            )));
        }
    }
    if let Some(n) = count {
        if data.len() != n * dim {
            return Err(Error::Parse(format!(
                "header promises {n} points, file has {}",
                data.len() / dim.max(1)
            )));
        }
    }
    let prov = Provenance::new(family.unwrap_or_else(|| "file".into()), seed);
    PointSequence::from_flat(dim, data, prov)
}
