//! Pair statistics beyond region counts: discrete energy, support size,
//! and difference-set size.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{distance_raw, Metric, PointSequence};
use crate::numeric::{serialize_f64, CompensatedSum};

const ROW_CHUNK: usize = 128;

/// Default snapping grid for identifying equal points or differences.
pub const DEFAULT_QUANTUM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Energy {
    #[serde(serialize_with = "serialize_f64")]
    pub energy: f64,
    /// Ordered pairs of coincident points left out of the sum.
    pub skipped_pairs: u64,
}

/// `I_s = N^{-2} Σ_{n ≠ m} dist(v_n, v_m)^{-s}`; coincident pairs are skipped
/// and counted.
pub fn discrete_energy(
    seq: &PointSequence,
    s: f64,
    n: usize,
    metric: Metric,
    exec: Exec,
) -> Result<Energy> {
    let d = seq.dim() as f64;
    if !(s > 0.0 && s < d) {
        return Err(Error::param("s", format!("need 0 < s < d = {d}, got {s}")));
    }
    seq.require(n)?;
    if n < 2 {
        return Err(Error::param("n", "need at least two points"));
    }
    let parts = exec.map_chunks(n, ROW_CHUNK, |rows| {
        let mut sum = CompensatedSum::new();
        let mut skipped = 0u64;
        for i in rows {
            let x = seq.coords(i);
            for j in 0..i {
                let r = distance_raw(metric, x, seq.coords(j));
                if r == 0.0 {
                    skipped += 2;
                } else {
                    sum.add(2.0 * r.powf(-s));
                }
            }
        }
        (sum, skipped)
    });
    let mut sum = CompensatedSum::new();
    let mut skipped = 0;
    for (p, k) in &parts {
        sum.merge(p);
        skipped += k;
    }
    if skipped == (n * (n - 1)) as u64 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    Ok(Energy {
        energy: sum.value() / (n * n) as f64,
        skipped_pairs: skipped,
    })
}

fn check_quantum(quantum: f64) -> Result<i64> {
    if !(quantum > 0.0 && quantum <= 1.0) {
        return Err(Error::param(
            "quantum",
            format!("need 0 < quantum <= 1, got {quantum}"),
        ));
    }
    Ok((1.0 / quantum).round() as i64)
}

/// Snaps `t` (mod 1) to the quantum grid, identifying 0 and 1.
#[inline]
fn snap(t: f64, quantum: f64, modulus: i64) -> i64 {
    ((t / quantum).round() as i64).rem_euclid(modulus)
}

/// Number of distinct points among the first `n` after snapping.
pub fn support_count(seq: &PointSequence, n: usize, quantum: f64) -> Result<usize> {
    let m = check_quantum(quantum)?;
    seq.require(n)?;
    let set: HashSet<Vec<i64>> = (0..n)
        .map(|i| seq.coords(i).iter().map(|&c| snap(c, quantum, m)).collect())
        .collect();
    Ok(set.len())
}

/// Number of distinct differences `v_n - v_m (mod 1)` over all `N²` ordered
/// pairs after snapping.
pub fn difference_set_count(
    seq: &PointSequence,
    n: usize,
    quantum: f64,
    exec: Exec,
) -> Result<usize> {
    let m = check_quantum(quantum)?;
    seq.require(n)?;
    let d = seq.dim();
    let parts: Vec<Vec<i64>> = exec.map_chunks(n, ROW_CHUNK, |rows| {
        let mut keys = Vec::with_capacity(rows.len() * n * d);
        for i in rows {
            let x = seq.coords(i);
            for j in 0..n {
                keys.extend(
                    x.iter()
                        .zip(seq.coords(j))
                        .map(|(a, b)| snap(a - b, quantum, m)),
                );
            }
        }
        keys
    });
    let mut set: HashSet<&[i64]> = HashSet::with_capacity(n * n);
    for p in &parts {
        set.extend(p.chunks_exact(d));
    }
    Ok(set.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GeneratorConfig};
    use crate::geometry::Provenance;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn from_flat(dim: usize, data: Vec<f64>) -> PointSequence {
        PointSequence::from_flat(dim, data, Provenance::new("test", 0)).unwrap()
    }

    #[test]
    fn two_point_energy() {
        let s = from_flat(2, vec![0.0, 0.0, 0.5, 0.0]);
        let e = discrete_energy(&s, 1.0, 2, Metric::Torus, Exec::Sequential).unwrap();
        assert_eq!(e.energy, 1.0);
        assert_eq!(e.skipped_pairs, 0);
    }

    #[test]
    fn energy_grows_with_s_on_a_fine_line() {
        let data: Vec<f64> = (0..50)
            .flat_map(|i| [0.2 + 0.005 * i as f64, 0.3])
            .collect();
        let s = from_flat(2, data);
        let lo = discrete_energy(&s, 1.5, 50, Metric::Euclidean, Exec::Sequential).unwrap();
        let hi = discrete_energy(&s, 1.6, 50, Metric::Euclidean, Exec::Sequential).unwrap();
        assert!(hi.energy > lo.energy);
    }

    #[test]
    fn coincident_points() {
        let s = from_flat(2, vec![0.1, 0.1, 0.1, 0.1, 0.3, 0.1]);
        let e = discrete_energy(&s, 1.0, 3, Metric::Torus, Exec::Sequential).unwrap();
        assert_eq!(e.skipped_pairs, 2);
        let all = from_flat(2, vec![0.1, 0.1, 0.1, 0.1]);
        assert!(matches!(
            discrete_energy(&all, 1.0, 2, Metric::Torus, Exec::Sequential),
            Err(Error::Degenerate(_))
        ));
        assert!(discrete_energy(&s, 2.0, 3, Metric::Torus, Exec::Sequential).is_err());
    }

    #[test]
    fn iid_energy_near_integral() {
        // ∫_{[-1/2,1/2]^2} |z|^{-1} dz = 4 ln(1 + √2).
        let reference = 4.0 * (1.0 + 2f64.sqrt()).ln();
        for seed in 0..3 {
            let s = generate(&GeneratorConfig::iid(2, seed), 4096).unwrap();
            let e = discrete_energy(&s, 1.0, 4096, Metric::Torus, Exec::Parallel).unwrap();
            assert!((e.energy / reference - 1.0).abs() < 0.05, "{}", e.energy);
        }
    }

    #[test]
    fn energy_independent_of_threads() {
        let s = generate(&GeneratorConfig::iid(3, 8), 1000).unwrap();
        let a = discrete_energy(&s, 1.3, 1000, Metric::Torus, Exec::Parallel).unwrap();
        let b = discrete_energy(&s, 1.3, 1000, Metric::Torus, Exec::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn supports() {
        let c = from_flat(1, vec![0.3; 20]);
        assert_eq!(support_count(&c, 20, DEFAULT_QUANTUM).unwrap(), 1);
        let s = generate(&GeneratorConfig::iid(2, 1), 512).unwrap();
        assert_eq!(support_count(&s, 512, DEFAULT_QUANTUM).unwrap(), 512);
        let periodic = from_flat(1, (0..37).map(|i| (i % 10) as f64 / 10.0).collect());
        for n in 10..=37 {
            assert_eq!(support_count(&periodic, n, DEFAULT_QUANTUM).unwrap(), 10);
        }
        assert!(support_count(&s, 512, 0.0).is_err());
    }

    #[test]
    fn difference_sets() {
        let c = from_flat(2, vec![0.3; 20]);
        assert_eq!(
            difference_set_count(&c, 10, DEFAULT_QUANTUM, Exec::Parallel).unwrap(),
            1
        );
        let s = generate(&GeneratorConfig::iid(2, 4), 512).unwrap();
        assert_eq!(
            difference_set_count(&s, 512, DEFAULT_QUANTUM, Exec::Parallel).unwrap(),
            512 * 512 - 512 + 1
        );
        let k = generate(
            &GeneratorConfig::new(Family::Kronecker { alpha: None }, 1, 0),
            512,
        )
        .unwrap();
        assert_eq!(
            difference_set_count(&k, 512, DEFAULT_QUANTUM, Exec::Parallel).unwrap(),
            1023
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn energy_is_permutation_and_translation_invariant(seed in 0u64..500, shift in proptest::collection::vec(0.0f64..1.0, 2)) {
            let s = generate(&GeneratorConfig::iid(2, seed), 60).unwrap();
            let base = discrete_energy(&s, 1.0, 60, Metric::Torus, Exec::Sequential).unwrap().energy;
            let rev = discrete_energy(&s.reversed(), 1.0, 60, Metric::Torus, Exec::Sequential).unwrap().energy;
            let moved: Vec<f64> = s.flat().chunks(2).flat_map(|p| [p[0] + shift[0], p[1] + shift[1]]).collect();
            let t = from_flat(2, moved);
            let tr = discrete_energy(&t, 1.0, 60, Metric::Torus, Exec::Sequential).unwrap().energy;
            assert_relative_eq!(base, rev, max_relative = 1e-12);
            assert_relative_eq!(base, tr, max_relative = 1e-9);
        }
    }
}
