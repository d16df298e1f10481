//! Ordered pair counts `#{(n, m) : a ≤ ‖v_n - v_m‖ ≤ b}` on the torus.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{torus_distance_raw, PointSequence, RegionSpec};

const ROW_CHUNK: usize = 128;

/// Padding on the cell-pair distance bounds, well above the rounding error
/// of both the bounds and the computed distances.
const CELL_SLACK: f64 = 1e-9;

pub(crate) fn check_annulus(a: f64, b: f64) -> Result<()> {
    RegionSpec::annulus(a, b).map(|_| ())
}

/// Checkpoints must be positive, strictly increasing, and within the sequence.
pub(crate) fn check_checkpoints(seq: &PointSequence, checkpoints: &[usize]) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::param("checkpoints", "need at least one checkpoint"));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param(
            "checkpoints",
            "must be positive and strictly increasing",
        ));
    }
    seq.require(*checkpoints.last().unwrap())
}

/// Index of the first checkpoint that includes point `m`.
fn bucket_of(checkpoints: &[usize], m: usize) -> usize {
    checkpoints.partition_point(|&c| c <= m)
}

fn cumulate(hist: &[u64]) -> Vec<u64> {
    hist.iter()
        .scan(0u64, |acc, &h| {
            *acc += h;
            Some(*acc)
        })
        .collect()
}

/// O(N²) reference count.
pub fn count_annulus_pairs(
    seq: &PointSequence,
    a: f64,
    b: f64,
    n: usize,
    exec: Exec,
) -> Result<u64> {
    Ok(count_annulus_pairs_checkpoints(seq, a, b, &[n], exec)?[0])
}

/// Reference counts at several prefix lengths in one pass.
pub fn count_annulus_pairs_checkpoints(
    seq: &PointSequence,
    a: f64,
    b: f64,
    checkpoints: &[usize],
    exec: Exec,
) -> Result<Vec<u64>> {
    check_annulus(a, b)?;
    check_checkpoints(seq, checkpoints)?;
    let n = *checkpoints.last().unwrap();
    let parts = exec.map_chunks(n, ROW_CHUNK, |rows| {
        let mut hist = vec![0u64; checkpoints.len()];
        for i in rows {
            let x = seq.coords(i);
            let hits = (0..i)
                .filter(|&j| {
                    let d = torus_distance_raw(x, seq.coords(j));
                    a <= d && d <= b
                })
                .count() as u64;
            hist[bucket_of(checkpoints, i)] += 2 * hits;
        }
        hist
    });
    let mut hist = vec![0u64; checkpoints.len()];
    for p in parts {
        for (h, v) in hist.iter_mut().zip(p) {
            *h += v;
        }
    }
    Ok(cumulate(&hist))
}

/// Grid-accelerated count, identical in value to [`count_annulus_pairs`].
pub fn count_annulus_pairs_grid(
    seq: &PointSequence,
    a: f64,
    b: f64,
    n: usize,
    exec: Exec,
) -> Result<u64> {
    Ok(count_annulus_pairs_grid_checkpoints(seq, a, b, &[n], exec)?[0])
}

/// Points bucketed into a uniform `side^d` grid, in index order per cell.
struct CellGrid {
    dim: usize,
    side: usize,
    starts: Vec<usize>,
    index: Vec<usize>,
    coords: Vec<f64>,
}

impl CellGrid {
    fn build(seq: &PointSequence, n: usize, side: usize) -> Self {
        let dim = seq.dim();
        let cell_of = |x: &[f64]| {
            x.iter().rev().fold(0usize, |acc, &c| {
                let k = ((c * side as f64) as usize).min(side - 1);
                acc * side + k
            })
        };
        let cells = side.pow(dim as u32);
        let mut starts = vec![0usize; cells + 1];
        let ids: Vec<usize> = (0..n).map(|i| cell_of(seq.coords(i))).collect();
        for &c in &ids {
            starts[c + 1] += 1;
        }
        for c in 0..cells {
            starts[c + 1] += starts[c];
        }
        let mut fill = starts.clone();
        let mut index = vec![0usize; n];
        for (i, &c) in ids.iter().enumerate() {
            index[fill[c]] = i;
            fill[c] += 1;
        }
        let coords = index
            .iter()
            .flat_map(|&i| seq.coords(i).iter().copied())
            .collect();
        Self {
            dim,
            side,
            starts,
            index,
            coords,
        }
    }

    fn cells(&self) -> usize {
        self.starts.len() - 1
    }

    fn point(&self, slot: usize) -> &[f64] {
        &self.coords[slot * self.dim..(slot + 1) * self.dim]
    }

    /// Cell reached from `cell` by adding `offset` (per-axis, mod side).
    fn shifted(&self, cell: usize, offset: &[usize]) -> usize {
        let mut rest = cell;
        let mut out = 0;
        let mut stride = 1;
        for &o in offset {
            let c = rest % self.side;
            rest /= self.side;
            out += ((c + o) % self.side) * stride;
            stride *= self.side;
        }
        out
    }
}

/// Wrapped distance of a real number to the nearest integer.
fn wrapped(t: f64) -> f64 {
    let f = t - t.floor();
    f.min(1.0 - f)
}

/// Range of `wrapped(t)` over `t ∈ [lo, hi]` with `hi - lo ≤ 2`.
fn wrapped_range(lo: f64, hi: f64) -> (f64, f64) {
    let min = if lo.ceil() <= hi {
        0.0
    } else {
        wrapped(lo).min(wrapped(hi))
    };
    let max = if (lo - 0.5).ceil() <= hi - 0.5 {
        0.5
    } else {
        wrapped(lo).max(wrapped(hi))
    };
    (min, max)
}

enum OffsetClass {
    Inside,
    Partial,
}

/// Offsets between cells whose pairs can fall in `[a, b]`.
fn relevant_offsets(dim: usize, side: usize, a: f64, b: f64) -> Vec<(Vec<usize>, OffsetClass)> {
    let g = side as f64;
    let axis: Vec<(f64, f64)> = (0..side)
        .map(|o| wrapped_range((o as f64 - 1.0) / g, (o as f64 + 1.0) / g))
        .collect();
    let total = side.pow(dim as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let offset: Vec<usize> = (0..dim)
            .map(|_| {
                let o = rest % side;
                rest /= side;
                o
            })
            .collect();
        let (mut lo2, mut hi2) = (0.0, 0.0);
        for &o in &offset {
            lo2 += axis[o].0 * axis[o].0;
            hi2 += axis[o].1 * axis[o].1;
        }
        let (lo, hi) = (lo2.sqrt() - CELL_SLACK, hi2.sqrt() + CELL_SLACK);
        if lo > b || hi < a {
            continue;
        }
        let class = if lo >= a && hi <= b {
            OffsetClass::Inside
        } else {
            OffsetClass::Partial
        };
        out.push((offset, class));
    }
    out
}

/// Cells per axis: about `1 / max(b - a, 1/64)`, with at most about `4N`
/// cells in total.
fn grid_side(dim: usize, n: usize, a: f64, b: f64) -> usize {
    let by_width = (1.0 / (b - a).max(1.0 / 64.0)).floor() as usize;
    let by_count = ((4 * n.max(1)) as f64).powf(1.0 / dim as f64).floor() as usize;
    by_width.min(by_count).max(1)
}

/// Grid-accelerated counts at several prefix lengths in one pass.
pub fn count_annulus_pairs_grid_checkpoints(
    seq: &PointSequence,
    a: f64,
    b: f64,
    checkpoints: &[usize],
    exec: Exec,
) -> Result<Vec<u64>> {
    check_annulus(a, b)?;
    check_checkpoints(seq, checkpoints)?;
    let n = *checkpoints.last().unwrap();
    let dim = seq.dim();
    let grid = CellGrid::build(seq, n, grid_side(dim, n, a, b));
    let offsets = relevant_offsets(dim, grid.side, a, b);
    let k = checkpoints.len();

    // `hist[c]` holds checked pairs first included at checkpoint c;
    // `direct[c]` holds shortcut pairs already cumulated per checkpoint.
    let parts = exec.map_chunks(grid.cells(), 64, |cells| {
        let mut hist = vec![0u64; k];
        let mut direct = vec![0u64; k];
        for c1 in cells {
            let s1 = grid.starts[c1]..grid.starts[c1 + 1];
            if s1.is_empty() {
                continue;
            }
            for (offset, class) in &offsets {
                let c2 = grid.shifted(c1, offset);
                let s2 = grid.starts[c2]..grid.starts[c2 + 1];
                if s2.is_empty() {
                    continue;
                }
                match class {
                    OffsetClass::Inside => {
                        let i1 = &grid.index[s1.clone()];
                        let i2 = &grid.index[s2.clone()];
                        for (c, &cp) in checkpoints.iter().enumerate() {
                            let n1 = i1.partition_point(|&i| i < cp) as u64;
                            let n2 = i2.partition_point(|&i| i < cp) as u64;
                            direct[c] += n1 * n2;
                        }
                    }
                    OffsetClass::Partial => {
                        for p in s1.clone() {
                            let x = grid.point(p);
                            let ip = grid.index[p];
                            for q in s2.clone() {
                                let d = torus_distance_raw(x, grid.point(q));
                                if a <= d && d <= b {
                                    let m = ip.max(grid.index[q]);
                                    hist[bucket_of(checkpoints, m)] += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        (hist, direct)
    });
    let mut hist = vec![0u64; k];
    let mut direct = vec![0u64; k];
    for (h, d) in parts {
        for c in 0..k {
            hist[c] += h[c];
            direct[c] += d[c];
        }
    }
    Ok(cumulate(&hist)
        .into_iter()
        .zip(direct)
        .map(|(h, d)| h + d)
        .collect())
}

/// Thin-annulus surrogate for `#{(n, m) : ‖v_n - v_m‖ = t}`.
pub fn exact_distance_count(
    seq: &PointSequence,
    t: f64,
    n: usize,
    eta: f64,
    exec: Exec,
) -> Result<u64> {
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::param("eta", "must be nonnegative"));
    }
    if !(t - eta >= 0.01 && t + eta < 0.5) {
        return Err(Error::param(
            "t",
            format!("need 1/100 <= t - eta and t + eta < 1/2, got t={t}, eta={eta}"),
        ));
    }
    count_annulus_pairs_grid(seq, t - eta, t + eta, n, exec)
}

/// Default half-width of the exact-distance annulus.
pub const DEFAULT_ETA: f64 = 1e-9;
