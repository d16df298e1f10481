//! Experiment orchestration: seeded sweeps over `N`, log-log exponent fits,
//! and verdicts against the predicted exponents.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::{theorem1_remainder_bound, theorem2_remainder_bound};
use crate::generators::{generate, GeneratorConfig};
use crate::geometry::{PointSequence, RegionSpec};
use crate::incidence::{
    annulus_reports, difference_set_count, slab_reports, support_count, IncidenceReport,
    MainTermSampling, DEFAULT_QUANTUM,
};
use crate::numeric::{fmt17, median, serialize_f64, serialize_f64_slice, LinearFit};
use crate::weyl::{default_kmax, estimate_gamma, weyl_profile, FrequencySpec, DEFAULT_EPSILON};

/// Default allowance on fitted exponents, in log-log slope units.
pub const DEFAULT_TOLERANCE: f64 = 0.15;

/// `2^9, …, 2^13`.
pub fn default_checkpoints() -> Vec<usize> {
    (9..=13).map(|e| 1usize << e).collect()
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_samples() -> u64 {
    MainTermSampling::default().samples
}

fn default_quantum() -> f64 {
    DEFAULT_QUANTUM
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
}

/// One sweep, as read from a JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorConfig,
    pub region: RegionSpec,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Estimated from the generator's Weyl sums when absent.
    #[serde(default)]
    pub gamma_assumed: Option<f64>,
    /// The `ε` loss added to predicted exponents.
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Monte Carlo samples for the slab main term.
    #[serde(default = "default_samples")]
    pub main_term_samples: u64,
    #[serde(default)]
    pub main_term_seed: u64,
    /// Snapping grid for support and difference-set counts.
    #[serde(default = "default_quantum")]
    pub quantum: f64,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn new(
        generator: GeneratorConfig,
        region: RegionSpec,
        checkpoints: Vec<usize>,
        seeds: Vec<u64>,
    ) -> Self {
        Self {
            generator,
            region,
            checkpoints,
            seeds,
            gamma_assumed: None,
            epsilon: 0.0,
            tolerance: DEFAULT_TOLERANCE,
            main_term_samples: default_samples(),
            main_term_seed: 0,
            quantum: DEFAULT_QUANTUM,
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.region
            .validate()
            .map_err(|e| Error::config("region", e.to_string()))?;
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed required"));
        }
        if self.checkpoints.is_empty() || self.checkpoints[0] == 0 {
            return Err(Error::config("checkpoints", "need positive checkpoints"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("checkpoints", "must be strictly increasing"));
        }
        if let Some(g) = self.gamma_assumed {
            if !(0.0..=0.5).contains(&g) {
                return Err(Error::config(
                    "gamma_assumed",
                    format!("need 0 <= gamma <= 1/2, got {g}"),
                ));
            }
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::config("epsilon", "must be finite and nonnegative"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::config("tolerance", "must be finite and nonnegative"));
        }
        if !(self.quantum > 0.0 && self.quantum <= 1.0) {
            return Err(Error::config("quantum", "need 0 < quantum <= 1"));
        }
        Ok(())
    }

    fn max_n(&self) -> usize {
        *self.checkpoints.last().unwrap()
    }

    fn sequence(&self, seed: u64) -> Result<PointSequence> {
        generate(&self.generator.with_seed(seed), self.max_n())
    }

    /// Seeds in ascending order without repeats.
    fn sorted_seeds(&self) -> Vec<u64> {
        let mut s = self.seeds.clone();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// Seed of the second, independent sequence in a slab experiment.
pub fn partner_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// `γ̂` from the Weyl sums of the generator at `seed`, clamped to `[0, 1/2]`.
pub fn measured_gamma(
    generator: &GeneratorConfig,
    seed: u64,
    checkpoints: &[usize],
    exec: Exec,
) -> Result<f64> {
    let n = *checkpoints
        .last()
        .ok_or_else(|| Error::config("checkpoints", "need at least one checkpoint"))?;
    let seq = generate(&generator.with_seed(seed), n)?;
    let freq = FrequencySpec::new(generator.dim, default_kmax(generator.dim))?;
    let profile = weyl_profile(&seq, &freq, checkpoints, DEFAULT_EPSILON, exec)?;
    Ok(estimate_gamma(&profile)?.gamma_hat.clamp(0.0, 0.5))
}

/// Which side of the prediction the fitted slope must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `slope ≤ predicted + tolerance`.
    Upper,
    /// `slope ≥ predicted - tolerance`.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    WithinBound,
    Exceeds,
}

pub fn verdict(kind: BoundKind, slope: f64, predicted: f64, tolerance: f64) -> Verdict {
    let ok = match kind {
        BoundKind::Upper => slope <= predicted + tolerance,
        BoundKind::Lower => slope >= predicted - tolerance,
    };
    if ok {
        Verdict::WithinBound
    } else {
        Verdict::Exceeds
    }
}

/// Log-log fit of a per-checkpoint statistic with its verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub statistic: String,
    pub checkpoints: Vec<usize>,
    #[serde(serialize_with = "serialize_f64_slice")]
    pub values: Vec<f64>,
    /// Checkpoints left out because the statistic was zero there.
    pub dropped: Vec<usize>,
    #[serde(serialize_with = "serialize_f64")]
    pub slope: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub intercept: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub slope_stderr: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub r_squared: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub gamma: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub epsilon: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub predicted_slope: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub tolerance: f64,
    pub bound: BoundKind,
    pub verdict: Verdict,
}

impl ScalingFit {
    /// Fits `log value` against `log N` after dropping zero values.
    #[allow(clippy::too_many_arguments)]
    pub fn fit(
        statistic: &str,
        checkpoints: &[usize],
        values: &[f64],
        gamma: f64,
        epsilon: f64,
        predicted_slope: f64,
        tolerance: f64,
        bound: BoundKind,
    ) -> Result<Self> {
        let mut kept_n = Vec::new();
        let mut kept_v = Vec::new();
        let mut dropped = Vec::new();
        for (&n, &v) in checkpoints.iter().zip(values) {
            if v > 0.0 {
                kept_n.push(n);
                kept_v.push(v);
            } else {
                dropped.push(n);
            }
        }
        if kept_n.len() < 3 {
            return Err(Error::Degenerate(format!(
                "{} checkpoints with nonzero {statistic}; need at least 3",
                kept_n.len()
            )));
        }
        let xs: Vec<f64> = kept_n.iter().map(|&n| n as f64).collect();
        let line = LinearFit::fit_log_log(&xs, &kept_v)?;
        Ok(Self {
            statistic: statistic.to_string(),
            checkpoints: kept_n,
            values: kept_v,
            dropped,
            slope: line.slope,
            intercept: line.intercept,
            slope_stderr: line.slope_stderr,
            r_squared: line.r_squared,
            gamma,
            epsilon,
            predicted_slope,
            tolerance,
            bound,
            verdict: verdict(bound, line.slope, predicted_slope, tolerance),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Per-seed reports and the fit of the median `|R|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Sorted by seed, then `N`.
    pub rows: Vec<(u64, IncidenceReport)>,
    pub fit: ScalingFit,
}

impl SweepResult {
    /// One row per `(seed, N)`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "seed,N,count,main_term,main_term_stderr,remainder,abs_remainder"
        )?;
        for (seed, r) in &self.rows {
            writeln!(
                out,
                "{seed},{},{},{},{},{},{}",
                r.n,
                fmt17(r.count),
                fmt17(r.main_term),
                fmt17(r.main_term_stderr),
                fmt17(r.remainder),
                fmt17(r.remainder.abs())
            )?;
        }
        Ok(())
    }
}

/// Median `|R|` at each checkpoint, across seeds.
fn median_abs_remainders(per_seed: &[Vec<IncidenceReport>], k: usize) -> Vec<f64> {
    (0..k)
        .map(|c| {
            let v: Vec<f64> = per_seed.iter().map(|r| r[c].remainder.abs()).collect();
            median(&v).unwrap_or(0.0)
        })
        .collect()
}

fn resolve_gamma(config: &ExperimentConfig, exec: Exec) -> Result<f64> {
    match config.gamma_assumed {
        Some(g) => Ok(g),
        None => measured_gamma(
            &config.generator,
            config.sorted_seeds()[0],
            &config.checkpoints,
            exec,
        ),
    }
}

/// Annulus or slab remainder sweep, depending on the region.
pub fn scaling_sweep(config: &ExperimentConfig, exec: Exec) -> Result<SweepResult> {
    config.validate()?;
    let gamma = resolve_gamma(config, exec)?;
    let seeds = config.sorted_seeds();
    let n_max = config.max_n();
    let cps = &config.checkpoints;
    let eps = config.epsilon;
    let (per_seed, predicted) = match config.region {
        RegionSpec::Annulus { a, b, .. } => {
            config.region.validate_for_counting()?;
            let per_seed = exec
                .map(seeds.len(), |i| {
                    annulus_reports(&config.sequence(seeds[i])?, a, b, cps, exec)
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let bound =
                theorem1_remainder_bound(gamma, config.generator.dim, n_max.max(2) as u64, eps)?;
            (per_seed, bound.count_exponent)
        }
        RegionSpec::Slab { a, b } => {
            let sampling = MainTermSampling {
                samples: config.main_term_samples,
                seed: config.main_term_seed,
            };
            let per_seed = exec
                .map(seeds.len(), |i| {
                    let v = config.sequence(seeds[i])?;
                    let w = config.sequence(partner_seed(seeds[i]))?;
                    slab_reports(&v, &w, a, b, cps, sampling, exec)
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let bound = theorem2_remainder_bound(gamma, n_max.max(2) as u64, eps)?;
            (per_seed, bound.count_exponent)
        }
    };
    let values = median_abs_remainders(&per_seed, cps.len());
    let fit = ScalingFit::fit(
        "median_abs_remainder",
        cps,
        &values,
        gamma,
        eps,
        predicted,
        config.tolerance,
        BoundKind::Upper,
    )?;
    let rows = seeds
        .iter()
        .zip(per_seed)
        .flat_map(|(&s, reps)| reps.into_iter().map(move |r| (s, r)))
        .collect();
    Ok(SweepResult { rows, fit })
}

/// Which distinct-value count a support sweep measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportStatistic {
    /// Distinct points; predicted growth `N^{2γ - ε}`.
    Support,
    /// Distinct differences; predicted growth `N^{4γ - ε}`.
    DifferenceSet,
}

/// Per-seed counts and the fit of their median.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSweep {
    /// `(seed, N, count)`, sorted by seed then `N`.
    pub rows: Vec<(u64, usize, usize)>,
    pub fit: ScalingFit,
}

impl SupportSweep {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "seed,N,count")?;
        for (seed, n, c) in &self.rows {
            writeln!(out, "{seed},{n},{c}")?;
        }
        Ok(())
    }
}

/// Counts at each checkpoint for already generated sequences.
#[allow(clippy::too_many_arguments)]
pub fn support_sweep_sequences(
    seqs: &[(u64, PointSequence)],
    checkpoints: &[usize],
    statistic: SupportStatistic,
    quantum: f64,
    gamma: f64,
    epsilon: f64,
    tolerance: f64,
    exec: Exec,
) -> Result<SupportSweep> {
    if seqs.is_empty() {
        return Err(Error::config("seeds", "at least one seed required"));
    }
    let per_seed = seqs
        .iter()
        .map(|(_, seq)| {
            checkpoints
                .iter()
                .map(|&n| match statistic {
                    SupportStatistic::Support => support_count(seq, n, quantum),
                    SupportStatistic::DifferenceSet => difference_set_count(seq, n, quantum, exec),
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = (0..checkpoints.len())
        .map(|c| {
            let v: Vec<f64> = per_seed.iter().map(|r| r[c] as f64).collect();
            median(&v).unwrap_or(0.0)
        })
        .collect();
    let (name, predicted) = match statistic {
        SupportStatistic::Support => ("support_count", 2.0 * gamma - epsilon),
        SupportStatistic::DifferenceSet => ("difference_set_count", 4.0 * gamma - epsilon),
    };
    let fit = ScalingFit::fit(
        name,
        checkpoints,
        &values,
        gamma,
        epsilon,
        predicted,
        tolerance,
        BoundKind::Lower,
    )?;
    let rows = seqs
        .iter()
        .zip(&per_seed)
        .flat_map(|((s, _), counts)| {
            checkpoints
                .iter()
                .zip(counts)
                .map(move |(&n, &c)| (*s, n, c))
        })
        .collect();
    Ok(SupportSweep { rows, fit })
}

/// Support or difference-set growth over the configured seeds.
pub fn support_sweep(
    config: &ExperimentConfig,
    statistic: SupportStatistic,
    exec: Exec,
) -> Result<SupportSweep> {
    config.validate()?;
    let gamma = resolve_gamma(config, exec)?;
    let seqs = config
        .sorted_seeds()
        .into_iter()
        .map(|s| Ok((s, config.sequence(s)?)))
        .collect::<Result<Vec<_>>>()?;
    support_sweep_sequences(
        &seqs,
        &config.checkpoints,
        statistic,
        config.quantum,
        gamma,
        config.epsilon,
        config.tolerance,
        exec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Family;
    use crate::geometry::Provenance;
    use crate::incidence::count_annulus_pairs;
    use proptest::prelude::*;

    #[test]
    fn config_round_trip_and_defaults() {
        let text = r#"{
            "generator": {"family": "iid", "dim": 2},
            "region": {"kind": "annulus", "a": 0.25, "b": 0.3},
            "seeds": [1, 2, 3]
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.checkpoints, vec![512, 1024, 2048, 4096, 8192]);
        assert_eq!(cfg.tolerance, 0.15);
        assert_eq!(cfg.gamma_assumed, None);
        let again = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn config_errors_name_the_field() {
        let bad = r#"{"generator": {"family": "iid", "dim": 2},
                      "region": {"kind": "annulus", "a": 0.25, "b": 0.3},
                      "seeds": [], "checkpoints": [10, 20, 30]}"#;
        let err = ExperimentConfig::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("seeds"), "{err}");
        assert!(err.is_configuration());
        let bad = bad
            .replace("[]", "[1]")
            .replace("[10, 20, 30]", "[10, 30, 20]");
        assert!(ExperimentConfig::from_json(&bad)
            .unwrap_err()
            .to_string()
            .contains("checkpoints"));
    }

    #[test]
    fn constant_sequence_saturates() {
        let cfg = ExperimentConfig {
            gamma_assumed: Some(0.5),
            ..ExperimentConfig::new(
                GeneratorConfig::new(Family::Lattice { side: 1 }, 2, 0),
                RegionSpec::annulus(0.25, 0.3).unwrap(),
                vec![64, 128, 256, 512],
                vec![0],
            )
        };
        let sweep = scaling_sweep(&cfg, Exec::Parallel).unwrap();
        assert!((sweep.fit.slope - 2.0).abs() < 1e-12, "{}", sweep.fit.slope);
        assert!(sweep.rows.iter().all(|(_, r)| r.count == 0.0));
        assert_eq!(sweep.fit.verdict, Verdict::Exceeds);
    }

    #[test]
    fn sweep_counts_match_incidence_module() {
        let cfg = ExperimentConfig {
            gamma_assumed: Some(0.5),
            ..ExperimentConfig::new(
                GeneratorConfig::iid(2, 0),
                RegionSpec::annulus(0.25, 0.3).unwrap(),
                vec![100, 200, 400],
                vec![5, 3],
            )
        };
        let sweep = scaling_sweep(&cfg, Exec::Parallel).unwrap();
        assert_eq!(sweep.rows.len(), 6);
        assert_eq!(sweep.rows[0].0, 3);
        for (seed, r) in &sweep.rows {
            let seq = generate(&GeneratorConfig::iid(2, *seed), r.n).unwrap();
            let c = count_annulus_pairs(&seq, 0.25, 0.3, r.n, Exec::Sequential).unwrap();
            assert_eq!(r.count, c as f64);
        }
        let mut buf = Vec::new();
        sweep.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
        assert!((sweep.fit.predicted_slope - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_nonzero_checkpoints() {
        let fit = ScalingFit::fit(
            "x",
            &[1, 2, 3, 4],
            &[0.0, 0.0, 1.0, 2.0],
            0.5,
            0.0,
            1.0,
            0.15,
            BoundKind::Upper,
        );
        assert!(matches!(fit, Err(Error::Degenerate(_))));
        let fit = ScalingFit::fit(
            "x",
            &[1, 2, 3, 4],
            &[0.0, 1.0, 2.0, 3.0],
            0.5,
            0.0,
            1.0,
            0.15,
            BoundKind::Upper,
        )
        .unwrap();
        assert_eq!(fit.dropped, vec![1]);
        assert_eq!(fit.checkpoints, vec![2, 3, 4]);
    }

    #[test]
    fn support_sweeps() {
        let iid: Vec<(u64, PointSequence)> = (0..3)
            .map(|s| (s, generate(&GeneratorConfig::iid(2, s), 512).unwrap()))
            .collect();
        let cps = [64, 128, 256, 512];
        let s = support_sweep_sequences(
            &iid,
            &cps,
            SupportStatistic::Support,
            1e-9,
            0.5,
            0.1,
            0.15,
            Exec::Parallel,
        )
        .unwrap();
        assert!((s.fit.slope - 1.0).abs() < 1e-12);
        assert_eq!(s.fit.verdict, Verdict::WithinBound);

        let d = support_sweep_sequences(
            &iid,
            &cps,
            SupportStatistic::DifferenceSet,
            1e-9,
            0.5,
            0.1,
            0.15,
            Exec::Parallel,
        )
        .unwrap();
        assert!((d.fit.slope - 2.0).abs() < 0.01, "{}", d.fit.slope);
        assert_eq!(d.fit.verdict, Verdict::WithinBound);

        let periodic: Vec<f64> = (0..512).map(|i| (i % 10) as f64 / 10.0).collect();
        let p = PointSequence::from_flat(1, periodic, Provenance::new("periodic", 0)).unwrap();
        let s = support_sweep_sequences(
            &[(0, p)],
            &cps,
            SupportStatistic::Support,
            1e-9,
            0.1,
            0.0,
            0.15,
            Exec::Parallel,
        )
        .unwrap();
        assert!(s.fit.slope.abs() < 1e-12);
        assert_eq!(s.fit.verdict, Verdict::Exceeds);
    }

    #[test]
    fn gamma_defaults_to_measurement() {
        let cfg = ExperimentConfig::new(
            GeneratorConfig::iid(2, 0),
            RegionSpec::annulus(0.25, 0.3).unwrap(),
            vec![256, 512, 1024, 2048],
            vec![1],
        );
        let sweep = support_sweep(&cfg, SupportStatistic::Support, Exec::Parallel).unwrap();
        assert!(
            sweep.fit.gamma > 0.3 && sweep.fit.gamma <= 0.5,
            "{}",
            sweep.fit.gamma
        );
    }

    proptest! {
        #[test]
        fn verdict_monotone_in_tolerance(slope in -3.0f64..3.0, pred in -3.0f64..3.0, t1 in 0.0f64..1.0, dt in 0.0f64..1.0) {
            for kind in [BoundKind::Upper, BoundKind::Lower] {
                if verdict(kind, slope, pred, t1) == Verdict::WithinBound {
                    prop_assert_eq!(verdict(kind, slope, pred, t1 + dt), Verdict::WithinBound);
                }
            }
        }
    }
}
