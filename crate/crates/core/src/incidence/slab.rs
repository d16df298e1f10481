//! Weighted dot-product slab counts `Σ ψ(v_n) ψ(w_m)` over `a ≤ v_n · w_m ≤ b`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::bump_psi_raw;
use crate::geometry::{check_dims, PointSequence, MIN_INNER_RADIUS};
use crate::numeric::{serialize_f64, CompensatedSum};
use crate::rng::seeded_rng;

use super::annulus::check_checkpoints;

const ROW_CHUNK: usize = 256;
const MC_BATCH: usize = 1 << 16;

pub(crate) fn check_slab(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a >= MIN_INNER_RADIUS && a <= b) {
        return Err(Error::param(
            "region",
            format!("slab needs 1/100 <= a <= b, got [{a}, {b}]"),
        ));
    }
    Ok(())
}

struct Weighted<'a> {
    /// Points with nonzero weight, as (index, weight).
    live: Vec<(usize, f64)>,
    seq: &'a PointSequence,
}

impl<'a> Weighted<'a> {
    fn new(seq: &'a PointSequence, n: usize) -> Self {
        let live = (0..n)
            .map(|i| (i, bump_psi_raw(seq.coords(i))))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        Self { live, seq }
    }
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Weighted count over the `N²` ordered pairs `(v_n, w_m)`.
pub fn count_slab_pairs(
    v: &PointSequence,
    w: &PointSequence,
    a: f64,
    b: f64,
    n: usize,
    exec: Exec,
) -> Result<f64> {
    Ok(count_slab_pairs_checkpoints(v, w, a, b, &[n], exec)?[0])
}

/// Weighted counts at several prefix lengths in one pass.
///
/// Rows are processed in fixed chunks whose compensated partial sums are
/// merged in chunk order, so the result does not depend on the thread count.
pub fn count_slab_pairs_checkpoints(
    v: &PointSequence,
    w: &PointSequence,
    a: f64,
    b: f64,
    checkpoints: &[usize],
    exec: Exec,
) -> Result<Vec<f64>> {
    check_dims(v.dim(), w.dim())?;
    check_slab(a, b)?;
    check_checkpoints(v, checkpoints)?;
    check_checkpoints(w, checkpoints)?;
    let n = *checkpoints.last().unwrap();
    let k = checkpoints.len();
    let vs = Weighted::new(v, n);
    let ws = Weighted::new(w, n);
    let bucket = |i: usize| checkpoints.partition_point(|&c| c <= i);
    let w_buckets: Vec<usize> = ws.live.iter().map(|&(j, _)| bucket(j)).collect();

    let parts = exec.map_chunks(vs.live.len(), ROW_CHUNK, |rows| {
        let mut sums = vec![CompensatedSum::new(); k];
        for &(i, wi) in &vs.live[rows] {
            let x = vs.seq.coords(i);
            let bi = bucket(i);
            for (&(j, wj), &bj) in ws.live.iter().zip(&w_buckets) {
                let t = dot(x, ws.seq.coords(j));
                if a <= t && t <= b {
                    sums[bi.max(bj)].add(wi * wj);
                }
            }
        }
        sums
    });
    let mut total = vec![CompensatedSum::new(); k];
    for p in &parts {
        for (t, s) in total.iter_mut().zip(p) {
            t.merge(s);
        }
    }
    let mut acc = CompensatedSum::new();
    Ok(total
        .iter()
        .map(|s| {
            acc.merge(s);
            acc.value()
        })
        .collect())
}

/// Monte Carlo estimate of `∬_{a ≤ x·y ≤ b} ψ(x) ψ(y) dx dy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainTermEstimate {
    #[serde(serialize_with = "serialize_f64")]
    pub value: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Minimum sample count accepted by [`slab_main_term`].
pub const MIN_MAIN_TERM_SAMPLES: u64 = 10_000;

/// Samples `(x, y)` uniformly from `supp ψ × supp ψ = [0.1, 0.9]^{2d}`;
/// batch `i` draws from stream `i + 1` of `seed`.
pub fn slab_main_term(
    a: f64,
    b: f64,
    d: usize,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<MainTermEstimate> {
    if d == 0 {
        return Err(Error::param("d", "must be at least 1"));
    }
    if samples < MIN_MAIN_TERM_SAMPLES {
        return Err(Error::param(
            "samples",
            format!("need at least {MIN_MAIN_TERM_SAMPLES}"),
        ));
    }
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::param(
            "region",
            format!("need a <= b, got [{a}, {b}]"),
        ));
    }
    let volume = 0.8f64.powi(2 * d as i32);
    let batches = (samples as usize).div_ceil(MC_BATCH);
    let parts = exec.map(batches, |bi| {
        let count = MC_BATCH.min(samples as usize - bi * MC_BATCH);
        let mut rng = seeded_rng(seed, bi as u64 + 1);
        let mut s1 = CompensatedSum::new();
        let mut s2 = CompensatedSum::new();
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        for _ in 0..count {
            for c in x.iter_mut().chain(y.iter_mut()) {
                *c = 0.1 + 0.8 * rng.random::<f64>();
            }
            let t = dot(&x, &y);
            if a <= t && t <= b {
                let f = volume * bump_psi_raw(&x) * bump_psi_raw(&y);
                s1.add(f);
                s2.add(f * f);
            }
        }
        (s1, s2)
    });
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (p1, p2) in &parts {
        s1.merge(p1);
        s2.merge(p2);
    }
    let n = samples as f64;
    let mean = s1.value() / n;
    let var = (s2.value() / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MainTermEstimate {
        value: mean,
        stderr: (var / n).sqrt(),
        samples,
        seed,
    })
}
