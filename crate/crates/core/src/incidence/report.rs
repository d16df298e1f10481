//! Count / main term / remainder records.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::geometry::{annulus_volume, PointSequence, RegionSpec};
use crate::numeric::{fmt17, serialize_f64};

use super::annulus::{check_annulus, count_annulus_pairs_grid_checkpoints};
use super::slab::{check_slab, count_slab_pairs_checkpoints, slab_main_term};

/// One exact count split into `N²|Ω|` and the remainder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceReport {
    pub region: RegionSpec,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "serialize_f64")]
    pub count: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub main_term: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub main_term_stderr: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub remainder: f64,
}

impl IncidenceReport {
    pub fn new(
        region: RegionSpec,
        n: usize,
        count: f64,
        main_term: f64,
        main_term_stderr: f64,
    ) -> Self {
        Self {
            region,
            n,
            count,
            main_term,
            main_term_stderr,
            remainder: count - main_term,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Batch export with columns `N,count,main_term,remainder,abs_remainder`.
pub fn write_reports_csv<W: Write>(reports: &[IncidenceReport], mut out: W) -> Result<()> {
    writeln!(out, "N,count,main_term,remainder,abs_remainder")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt17(r.count),
            fmt17(r.main_term),
            fmt17(r.remainder),
            fmt17(r.remainder.abs())
        )?;
    }
    Ok(())
}

/// Annulus reports at each checkpoint, with the analytic main term.
pub fn annulus_reports(
    seq: &PointSequence,
    a: f64,
    b: f64,
    checkpoints: &[usize],
    exec: Exec,
) -> Result<Vec<IncidenceReport>> {
    check_annulus(a, b)?;
    let region = RegionSpec::annulus(a, b)?;
    let volume = annulus_volume(a, b, seq.dim())?;
    let counts = count_annulus_pairs_grid_checkpoints(seq, a, b, checkpoints, exec)?;
    Ok(checkpoints
        .iter()
        .zip(counts)
        .map(|(&n, c)| {
            let n2 = (n * n) as f64;
            IncidenceReport::new(region, n, c as f64, n2 * volume, 0.0)
        })
        .collect())
}

/// Monte Carlo settings for the slab main term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainTermSampling {
    pub samples: u64,
    pub seed: u64,
}

impl Default for MainTermSampling {
    fn default() -> Self {
        Self {
            samples: 10_000_000,
            seed: 0,
        }
    }
}

/// Slab reports at each checkpoint, with the Monte Carlo main term.
pub fn slab_reports(
    v: &PointSequence,
    w: &PointSequence,
    a: f64,
    b: f64,
    checkpoints: &[usize],
    sampling: MainTermSampling,
    exec: Exec,
) -> Result<Vec<IncidenceReport>> {
    check_slab(a, b)?;
    let region = RegionSpec::slab(a, b)?;
    let counts = count_slab_pairs_checkpoints(v, w, a, b, checkpoints, exec)?;
    let main = slab_main_term(a, b, v.dim(), sampling.samples, sampling.seed, exec)?;
    Ok(checkpoints
        .iter()
        .zip(counts)
        .map(|(&n, c)| {
            let n2 = (n * n) as f64;
            IncidenceReport::new(region, n, c, n2 * main.value, n2 * main.stderr)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorConfig};

    #[test]
    fn remainder_is_exact_difference() {
        let s = generate(&GeneratorConfig::iid(2, 3), 500).unwrap();
        let reps = annulus_reports(&s, 0.25, 0.3, &[100, 500], Exec::Parallel).unwrap();
        for r in &reps {
            assert_eq!(r.remainder, r.count - r.main_term);
            assert_eq!(r.count.fract(), 0.0);
            assert!(r.count <= (r.n * r.n) as f64);
            assert_eq!(r.main_term_stderr, 0.0);
        }
    }

    #[test]
    fn json_and_csv_shapes() {
        let s = generate(&GeneratorConfig::iid(2, 3), 64).unwrap();
        let reps = annulus_reports(&s, 0.25, 0.3, &[64], Exec::Sequential).unwrap();
        let v: serde_json::Value = serde_json::from_str(&reps[0].to_json().unwrap()).unwrap();
        for key in [
            "region",
            "N",
            "count",
            "main_term",
            "main_term_stderr",
            "remainder",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["region"]["kind"], "annulus");
        let mut buf = Vec::new();
        write_reports_csv(&reps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("N,count,main_term,remainder,abs_remainder\n64,"));
    }

    #[test]
    fn slab_reports_carry_stderr() {
        let v = generate(&GeneratorConfig::iid(2, 1), 200).unwrap();
        let w = generate(&GeneratorConfig::iid(2, 2), 200).unwrap();
        let sampling = MainTermSampling {
            samples: 100_000,
            seed: 3,
        };
        let reps = slab_reports(&v, &w, 0.5, 0.7, &[100, 200], sampling, Exec::Parallel).unwrap();
        assert!(reps.iter().all(|r| r.main_term_stderr > 0.0));
        assert_eq!(reps[1].remainder, reps[1].count - reps[1].main_term);
    }
}
