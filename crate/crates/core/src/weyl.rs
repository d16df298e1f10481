//! Weyl exponential sums and the γ-uniform distribution statistics built on them.
//!
//! A sequence is γ-uniformly distributed when, for every ε > 0,
//! `|S_N(k)| / N ≤ C_ε |k|^ε N^{-γ}` for all nonzero `k`, where
//! `S_N(k) = Σ_{n ≤ N} e^{2πi k·v_n}`. The estimator here fits the decay of
//! the box maximum `M(N) = max_k |k|^{-ε} |S_N(k)| / N` on a log-log scale.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{check_dims, PointSequence};
use crate::numeric::{fmt17, serialize_f64, unit_phase, ComplexSum, LinearFit};

/// Default ε of the estimator.
pub const DEFAULT_EPSILON: f64 = 0.1;

/// Default frequency box size for a dimension.
pub fn default_kmax(dim: usize) -> u32 {
    match dim {
        1 => 64,
        2 => 20,
        3 => 8,
        4 => 5,
        _ => 3,
    }
}

/// All `k ∈ Z^d` with `0 < |k|_∞ ≤ K`, in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencySpec {
    dim: usize,
    kmax: u32,
    flat: Vec<i64>,
}

impl FrequencySpec {
    pub fn new(dim: usize, kmax: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("dim", "must be at least 1"));
        }
        if kmax == 0 {
            return Err(Error::config("kmax", "empty frequency box"));
        }
        let side = 2 * kmax as usize + 1;
        let total = side
            .checked_pow(dim as u32)
            .filter(|t| *t <= 50_000_000)
            .ok_or_else(|| Error::config("kmax", "frequency box too large"))?;
        let mut flat = Vec::with_capacity((total - 1) * dim);
        let k = kmax as i64;
        for idx in 0..total {
            if idx == total / 2 {
                continue; // the zero vector
            }
            let mut rem = idx;
            let start = flat.len();
            flat.resize(start + dim, 0);
            for c in (0..dim).rev() {
                flat[start + c] = (rem % side) as i64 - k;
                rem /= side;
            }
        }
        Ok(Self { dim, kmax, flat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[i64] {
        &self.flat[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.flat.chunks_exact(self.dim)
    }

    /// Index of `-k` given the index of `k`.
    pub fn negation_index(&self, i: usize) -> usize {
        self.len() - 1 - i
    }
}

/// Euclidean norm of an integer frequency vector.
pub fn frequency_norm(k: &[i64]) -> f64 {
    k.iter()
        .map(|&x| (x as f64) * (x as f64))
        .sum::<f64>()
        .sqrt()
}

#[inline]
fn phase_arg(k: &[i64], v: &[f64]) -> f64 {
    k.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum()
}

/// Accumulates `Σ e^{2πi k·v_n}` over `range`, continuing from `acc`.
fn accumulate(seq: &PointSequence, k: &[i64], range: std::ops::Range<usize>, acc: &mut ComplexSum) {
    for n in range {
        acc.add(unit_phase(phase_arg(k, seq.coords(n))));
    }
}

/// `S_N(k) = Σ_{n=1}^{N} e^{2πi k·v_n}`; `k = 0` gives `N`.
pub fn exp_sum(seq: &PointSequence, k: &[i64], n: usize) -> Result<Complex64> {
    exp_sum_range(seq, k, 0..n)
}

/// The same sum restricted to 0-based indices `range`.
pub fn exp_sum_range(
    seq: &PointSequence,
    k: &[i64],
    range: std::ops::Range<usize>,
) -> Result<Complex64> {
    check_dims(seq.dim(), k.len())?;
    seq.require(range.end)?;
    let mut acc = ComplexSum::new();
    accumulate(seq, k, range, &mut acc);
    Ok(acc.value())
}

/// `S_N(k)` for every `k` in a frequency box and every checkpoint `N`.
#[derive(Clone, Debug)]
pub struct WeylProfile {
    pub freq: FrequencySpec,
    pub checkpoints: Vec<usize>,
    /// Row-major by frequency: `sums[k * checkpoints.len() + c]`.
    sums: Vec<Complex64>,
    pub epsilon: f64,
}

impl WeylProfile {
    pub fn sum(&self, k_index: usize, checkpoint_index: usize) -> Complex64 {
        self.sums[k_index * self.checkpoints.len() + checkpoint_index]
    }

    /// `max_k |k|^{-ε} |S_N(k)| / N` at each checkpoint.
    pub fn normalized_maxima(&self) -> Vec<f64> {
        let weights: Vec<f64> = self
            .freq
            .iter()
            .map(|k| frequency_norm(k).powf(-self.epsilon))
            .collect();
        self.checkpoints
            .iter()
            .enumerate()
            .map(|(c, &n)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(ki, w)| w * self.sum(ki, c).norm() / n as f64)
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Writes the table as CSV: `k_1..k_d,N,re,im,magnitude_over_N`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.freq.dim();
        let mut header: Vec<String> = (1..=d).map(|i| format!("k_{i}")).collect();
        header.extend(["N", "re", "im", "magnitude_over_N"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for (ki, k) in self.freq.iter().enumerate() {
            let kcols: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            let kcols = kcols.join(",");
            for (c, &n) in self.checkpoints.iter().enumerate() {
                let s = self.sum(ki, c);
                writeln!(
                    out,
                    "{kcols},{n},{},{},{}",
                    fmt17(s.re),
                    fmt17(s.im),
                    fmt17(s.norm() / n as f64)
                )?;
            }
        }
        Ok(())
    }
}

pub(crate) fn validate_checkpoints(checkpoints: &[usize], available: usize) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::config(
            "checkpoints",
            "at least one checkpoint required",
        ));
    }
    if checkpoints[0] == 0 {
        return Err(Error::config("checkpoints", "checkpoints must be positive"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("checkpoints", "must be strictly increasing"));
    }
    let last = *checkpoints.last().unwrap();
    if last > available {
        return Err(Error::Range {
            requested: last,
            available,
        });
    }
    Ok(())
}

/// Computes the profile incrementally: each checkpoint extends the previous
/// partial sum by the new indices only.
///
/// Work is split over frequencies; only one of each pair `±k` is summed and
/// the other is its exact conjugate.
pub fn weyl_profile(
    seq: &PointSequence,
    freq: &FrequencySpec,
    checkpoints: &[usize],
    epsilon: f64,
    exec: Exec,
) -> Result<WeylProfile> {
    check_dims(seq.dim(), freq.dim())?;
    if freq.is_empty() {
        return Err(Error::config("kmax", "empty frequency box"));
    }
    validate_checkpoints(checkpoints, seq.len())?;
    let nk = freq.len();
    let half = nk / 2;
    let nc = checkpoints.len();
    // Indices half..nk hold the vectors whose first nonzero entry is positive.
    let rows: Vec<Vec<Complex64>> = exec.map(nk - half, |j| {
        let k = freq.vector(half + j);
        let mut acc = ComplexSum::new();
        let mut start = 0;
        checkpoints
            .iter()
            .map(|&n| {
                accumulate(seq, k, start..n, &mut acc);
                start = n;
                acc.value()
            })
            .collect()
    });
    let mut sums = vec![Complex64::new(0.0, 0.0); nk * nc];
    for (j, row) in rows.into_iter().enumerate() {
        let pos = half + j;
        let neg = freq.negation_index(pos);
        for (c, s) in row.into_iter().enumerate() {
            sums[pos * nc + c] = s;
            sums[neg * nc + c] = s.conj();
        }
    }
    Ok(WeylProfile {
        freq: freq.clone(),
        checkpoints: checkpoints.to_vec(),
        sums,
        epsilon,
    })
}

/// Least-squares estimate of γ from a profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaFit {
    #[serde(serialize_with = "serialize_f64")]
    pub gamma_hat: f64,
    /// Fitted `ln C`.
    #[serde(skip)]
    pub intercept: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub stderr: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub r_squared: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub epsilon: f64,
    pub kmax: u32,
    pub checkpoints: Vec<usize>,
}

/// Fits `ln M(N) = ln C - γ ln N`.
pub fn estimate_gamma(profile: &WeylProfile) -> Result<GammaFit> {
    if profile.checkpoints.len() < 3 {
        return Err(Error::config(
            "checkpoints",
            format!(
                "need at least 3 checkpoints, got {}",
                profile.checkpoints.len()
            ),
        ));
    }
    let maxima = profile.normalized_maxima();
    if let Some(c) = maxima.iter().position(|m| *m <= 0.0) {
        return Err(Error::Degenerate(format!(
            "all exponential sums vanish at N = {}",
            profile.checkpoints[c]
        )));
    }
    let ns: Vec<f64> = profile.checkpoints.iter().map(|&n| n as f64).collect();
    let fit = LinearFit::fit_log_log(&ns, &maxima)?;
    Ok(GammaFit {
        gamma_hat: -fit.slope,
        intercept: fit.intercept,
        stderr: fit.slope_stderr,
        r_squared: fit.r_squared,
        epsilon: profile.epsilon,
        kmax: profile.freq.kmax(),
        checkpoints: profile.checkpoints.clone(),
    })
}

/// Outcome of the search for a frequency at which a finite set of reals
/// nearly aligns with the integers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdversarialFrequency {
    pub q: u64,
    /// `|S(q)| / N`.
    #[serde(serialize_with = "serialize_f64")]
    pub magnitude: f64,
    /// `Re S(q) / N`, the quantity maximized; within `2π ε` of 1 when the
    /// search reaches `ε^{-N}`.
    #[serde(serialize_with = "serialize_f64")]
    pub alignment: f64,
    /// Largest `q` examined.
    pub searched: u64,
    /// The search stopped at the budget before reaching `qmax`.
    pub budget_limited: bool,
}

/// Default cap on the number of frequencies examined.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// Exhaustive search over `q ∈ [1, qmax]` for the smallest `q` maximizing
/// `Re (1/N) Σ e^{2πi q v_n}`.
///
/// By simultaneous Dirichlet approximation some `q ≤ ⌈ε^{-N}⌉` has
/// `|q v_n - p_n| ≤ ε` for all `n`, which forces the alignment, and with it
/// the magnitude, to at least `1 - 2π ε`.
pub fn adversarial_frequency(
    points: &[f64],
    eps: f64,
    qmax: u64,
    budget: u64,
    exec: Exec,
) -> Result<AdversarialFrequency> {
    if points.is_empty() {
        return Err(Error::param("points", "need at least one point"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", format!("need 0 < eps < 1, got {eps}")));
    }
    if qmax == 0 {
        return Err(Error::param("qmax", "must be at least 1"));
    }
    let limit = qmax.min(budget.max(1));
    let n = points.len() as f64;
    const CHUNK: u64 = 1 << 16;
    let chunks = limit.div_ceil(CHUNK) as usize;
    let best = exec
        .map(chunks, |c| {
            let lo = c as u64 * CHUNK + 1;
            let hi = ((c as u64 + 1) * CHUNK).min(limit);
            let mut best = (f64::NEG_INFINITY, 0u64, Complex64::new(0.0, 0.0));
            for q in lo..=hi {
                let qf = q as f64;
                let mut acc = ComplexSum::new();
                for &v in points {
                    acc.add(unit_phase(qf * v));
                }
                let s = acc.value();
                if s.re > best.0 {
                    best = (s.re, q, s);
                }
            }
            best
        })
        .into_iter()
        .fold(
            (f64::NEG_INFINITY, 0u64, Complex64::new(0.0, 0.0)),
            |a, b| {
                if b.0 > a.0 {
                    b
                } else {
                    a
                }
            },
        );
    Ok(AdversarialFrequency {
        q: best.1,
        magnitude: best.2.norm() / n,
        alignment: best.0 / n,
        searched: limit,
        budget_limited: limit < qmax,
    })
}

/// `4 exp(-|k|^{2ε} N^{1-2γ} / 2)`, the union bound on the chance that an
/// i.i.d. sum exceeds `|k|^ε N^{1-γ}`; may exceed 1.
pub fn hoeffding_bound_raw(k: &[i64], n: usize, gamma: f64, eps: f64) -> Result<f64> {
    let norm = frequency_norm(k);
    if norm == 0.0 {
        return Err(Error::param("k", "frequency must be nonzero"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let e = norm.powf(2.0 * eps) * (n as f64).powf(1.0 - 2.0 * gamma);
    Ok(4.0 * (-0.5 * e).exp())
}

/// [`hoeffding_bound_raw`] clamped to `[0, 1]`.
pub fn hoeffding_bound(k: &[i64], n: usize, gamma: f64, eps: f64) -> Result<f64> {
    Ok(hoeffding_bound_raw(k, n, gamma, eps)?.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GeneratorConfig};
    use crate::geometry::Provenance;
    use approx::assert_relative_eq;

    fn constant(n: usize, d: usize, v: f64) -> PointSequence {
        PointSequence::from_flat(d, vec![v; n * d], Provenance::new("constant", 0)).unwrap()
    }

    #[test]
    fn box_size_and_order() {
        for (d, k) in [(1, 3u32), (2, 2), (3, 1), (2, 20)] {
            let f = FrequencySpec::new(d, k).unwrap();
            assert_eq!(f.len(), (2 * k as usize + 1).pow(d as u32) - 1);
            assert!(f.iter().all(|v| v.iter().any(|&x| x != 0)));
            for i in 0..f.len() {
                let neg: Vec<i64> = f.vector(i).iter().map(|x| -x).collect();
                assert_eq!(f.vector(f.negation_index(i)), &neg[..]);
            }
        }
        assert!(FrequencySpec::new(2, 0).is_err());
    }

    #[test]
    fn constant_sequence_sums_to_n() {
        let s = constant(37, 2, 0.0);
        let v = exp_sum(&s, &[3, -5], 37).unwrap();
        assert_eq!(v, Complex64::new(37.0, 0.0));
    }

    #[test]
    fn zero_frequency_counts_points() {
        let s = generate(&GeneratorConfig::iid(2, 3), 10).unwrap();
        assert_eq!(exp_sum(&s, &[0, 0], 10).unwrap(), Complex64::new(10.0, 0.0));
    }

    #[test]
    fn roots_of_unity_cancel() {
        let n = 64;
        let data: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let s = PointSequence::from_flat(1, data, Provenance::new("roots", 0)).unwrap();
        assert!(exp_sum(&s, &[1], n).unwrap().norm() < 1e-12);
    }

    #[test]
    fn iid_sum_of_square_root_size() {
        let n = 1 << 14;
        let mut mags = Vec::new();
        for seed in 0..100 {
            let s = generate(&GeneratorConfig::iid(2, seed), n).unwrap();
            let m = exp_sum(&s, &[1, 0], n).unwrap().norm();
            assert!(m <= 6.0 * (n as f64).sqrt());
            mags.push(m);
        }
        // |S|^2 / N is roughly exponential with mean 1.
        let mean_sq = mags.iter().map(|m| m * m / n as f64).sum::<f64>() / 100.0;
        assert!((0.6..1.5).contains(&mean_sq), "{mean_sq}");
    }

    #[test]
    fn range_errors() {
        let s = constant(5, 1, 0.1);
        assert!(matches!(
            exp_sum(&s, &[1], 6).unwrap_err(),
            Error::Range { .. }
        ));
        assert!(matches!(
            exp_sum(&s, &[1, 1], 2).unwrap_err(),
            Error::Dimension { .. }
        ));
    }

    #[test]
    fn additivity_over_ranges() {
        let s = generate(&GeneratorConfig::iid(2, 9), 3000).unwrap();
        let k = [4, -7];
        let a = exp_sum_range(&s, &k, 0..1234).unwrap();
        let b = exp_sum_range(&s, &k, 1234..3000).unwrap();
        let c = exp_sum(&s, &k, 3000).unwrap();
        assert!((a + b - c).norm() < 1e-12);
    }

    #[test]
    fn profile_matches_direct_sums() {
        let s = generate(&GeneratorConfig::iid(2, 21), 500).unwrap();
        let f = FrequencySpec::new(2, 3).unwrap();
        let cps = [10, 100, 500];
        let p = weyl_profile(&s, &f, &cps, 0.1, Exec::default()).unwrap();
        for (ki, k) in f.iter().enumerate() {
            for (c, &n) in cps.iter().enumerate() {
                assert_eq!(p.sum(ki, c), exp_sum(&s, k, n).unwrap());
                assert!(p.sum(ki, c).norm() <= n as f64);
            }
        }
    }

    #[test]
    fn profile_is_thread_independent() {
        let s = generate(&GeneratorConfig::iid(2, 4), 800).unwrap();
        let f = FrequencySpec::new(2, 4).unwrap();
        let a = weyl_profile(&s, &f, &[100, 800], 0.1, Exec::Sequential).unwrap();
        let b = weyl_profile(&s, &f, &[100, 800], 0.1, Exec::Parallel).unwrap();
        assert_eq!(a.sums, b.sums);
    }

    #[test]
    fn profile_conjugate_symmetry() {
        let s = generate(&GeneratorConfig::iid(3, 2), 200).unwrap();
        let f = FrequencySpec::new(3, 2).unwrap();
        let p = weyl_profile(&s, &f, &[50, 200], 0.1, Exec::default()).unwrap();
        for i in 0..f.len() {
            for c in 0..2 {
                assert_eq!(p.sum(i, c), p.sum(f.negation_index(i), c).conj());
            }
        }
    }

    #[test]
    fn lattice_is_blind_to_its_own_frequency() {
        let side = 8;
        let s = generate(
            &GeneratorConfig::new(Family::Lattice { side }, 2, 0),
            side * side,
        )
        .unwrap();
        let f = FrequencySpec::new(2, side as u32).unwrap();
        let p = weyl_profile(&s, &f, &[side * side], 0.1, Exec::default()).unwrap();
        let idx = f.iter().position(|k| k == [side as i64, 0]).unwrap();
        let v = p.sum(idx, 0);
        assert_relative_eq!(v.re, (side * side) as f64, epsilon = 1e-9);
        assert!(v.im.abs() < 1e-9);
    }

    #[test]
    fn profile_rejects_bad_checkpoints() {
        let s = constant(10, 1, 0.2);
        let f = FrequencySpec::new(1, 2).unwrap();
        assert!(weyl_profile(&s, &f, &[5, 5], 0.1, Exec::default()).is_err());
        assert!(weyl_profile(&s, &f, &[], 0.1, Exec::default()).is_err());
        assert!(weyl_profile(&s, &f, &[5, 11], 0.1, Exec::default()).is_err());
    }

    #[test]
    fn constant_sequence_has_gamma_zero() {
        let s = constant(1024, 2, 0.0);
        let f = FrequencySpec::new(2, 3).unwrap();
        let p = weyl_profile(&s, &f, &[64, 256, 1024], 0.1, Exec::default()).unwrap();
        for m in p.normalized_maxima() {
            assert_relative_eq!(m, 1.0, epsilon = 1e-12);
        }
        let g = estimate_gamma(&p).unwrap();
        assert!(g.gamma_hat.abs() < 1e-12);
    }

    #[test]
    fn gamma_needs_three_checkpoints_and_signal() {
        let s = constant(64, 1, 0.0);
        let f = FrequencySpec::new(1, 2).unwrap();
        let p = weyl_profile(&s, &f, &[32, 64], 0.1, Exec::default()).unwrap();
        assert!(estimate_gamma(&p).is_err());

        // Fourth roots of unity repeated: every sum over a multiple of 4 points
        // with |k| ≤ 3 cancels exactly.
        let data: Vec<f64> = (0..64).map(|i| (i % 4) as f64 / 4.0).collect();
        let s = PointSequence::from_flat(1, data, Provenance::new("roots", 0)).unwrap();
        let f = FrequencySpec::new(1, 3).unwrap();
        let p = weyl_profile(&s, &f, &[16, 32, 64], 0.1, Exec::default()).unwrap();
        // Floating-point sums are tiny but usually not exactly zero.
        let m = p.normalized_maxima();
        assert!(m.iter().all(|x| *x < 1e-14));
    }

    #[test]
    fn clustered_sequence_is_not_uniform() {
        let cfg = GeneratorConfig::new(
            Family::Clustered {
                clusters: 4,
                radius: 1e-3,
            },
            2,
            1,
        );
        let s = generate(&cfg, 1 << 12).unwrap();
        let f = FrequencySpec::new(2, 5).unwrap();
        let cps: Vec<usize> = (8..=12).map(|e| 1usize << e).collect();
        let p = weyl_profile(&s, &f, &cps, 0.1, Exec::default()).unwrap();
        assert!(estimate_gamma(&p).unwrap().gamma_hat < 0.2);
    }

    #[test]
    fn gamma_invariant_under_relabeling() {
        let s = generate(&GeneratorConfig::iid(2, 8), 1024).unwrap();
        let f = FrequencySpec::new(2, 4).unwrap();
        let p = weyl_profile(&s, &f, &[256, 512, 1024], 0.1, Exec::default()).unwrap();
        let g = estimate_gamma(&p).unwrap();
        // Reverse the frequency table: relabels k and maps k to -k.
        let mut q = p.clone();
        let nc = q.checkpoints.len();
        let nk = q.freq.len();
        for ki in 0..nk {
            for c in 0..nc {
                q.sums[ki * nc + c] = p.sum(nk - 1 - ki, c).conj();
            }
        }
        assert_eq!(estimate_gamma(&q).unwrap().gamma_hat, g.gamma_hat);
    }

    #[test]
    fn adversarial_half() {
        let r = adversarial_frequency(&[0.5; 6], 0.1, 100, DEFAULT_SEARCH_BUDGET, Exec::default())
            .unwrap();
        assert_eq!(r.q, 2);
        assert_relative_eq!(r.magnitude, 1.0, epsilon = 1e-15);
        assert!(!r.budget_limited);
    }

    #[test]
    fn adversarial_common_denominator() {
        let pts: Vec<f64> = [1.0, 3.0, 5.0, 2.0, 6.0].iter().map(|p| p / 7.0).collect();
        let r = adversarial_frequency(&pts, 0.05, 1000, DEFAULT_SEARCH_BUDGET, Exec::default())
            .unwrap();
        assert_eq!(r.q, 7);
        assert_relative_eq!(r.magnitude, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn adversarial_budget_flag() {
        let r = adversarial_frequency(&[0.123, 0.456], 0.05, 1000, 10, Exec::default()).unwrap();
        assert!(r.budget_limited);
        assert_eq!(r.searched, 10);
        assert!(r.q >= 1 && r.q <= 10);
        assert!(adversarial_frequency(&[0.1], 1.5, 10, 10, Exec::default()).is_err());
        assert!(adversarial_frequency(&[], 0.1, 10, 10, Exec::default()).is_err());
    }

    #[test]
    fn hoeffding_examples() {
        // gamma = 1/2: independent of N.
        let a = hoeffding_bound_raw(&[1, 1], 10, 0.5, 0.2).unwrap();
        let b = hoeffding_bound_raw(&[1, 1], 100_000, 0.5, 0.2).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-15);
        assert_relative_eq!(a, 4.0 * (-0.5 * 2f64.powf(0.2)).exp(), epsilon = 1e-15);
        // 4 exp(-100^{0.2} / 2).
        let raw = hoeffding_bound_raw(&[1, 0], 100, 0.4, 0.3).unwrap();
        assert_relative_eq!(raw, 1.1387, epsilon = 1e-3);
        assert_eq!(hoeffding_bound(&[1, 0], 100, 0.4, 0.3).unwrap(), 1.0);
        // Monotone decay in N for gamma < 1/2.
        let mut prev = f64::INFINITY;
        for e in 1..30 {
            let v = hoeffding_bound_raw(&[1, 0], 1 << e, 0.4, 0.1).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-10);
        assert!(hoeffding_bound(&[0, 0], 10, 0.4, 0.1).is_err());
    }

    #[test]
    fn profile_csv_layout() {
        let s = generate(&GeneratorConfig::iid(2, 1), 8).unwrap();
        let f = FrequencySpec::new(2, 1).unwrap();
        let p = weyl_profile(&s, &f, &[4, 8], 0.1, Exec::default()).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k_1,k_2,N,re,im,magnitude_over_N");
        assert_eq!(lines.len(), 1 + 8 * 2);
        assert!(lines[1].starts_with("-1,-1,4,"));
    }

    #[test]
    fn gamma_json_fields() {
        let g = GammaFit {
            gamma_hat: 0.5,
            intercept: 0.0,
            stderr: 0.01,
            r_squared: 0.99,
            epsilon: 0.1,
            kmax: 20,
            checkpoints: vec![256, 512, 1024],
        };
        let j: serde_json::Value = serde_json::to_value(&g).unwrap();
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            [
                "checkpoints",
                "epsilon",
                "gamma_hat",
                "kmax",
                "r_squared",
                "stderr"
            ]
        );
    }
}
