use rand::Rng;

use udinc::generators::{generate, read_sequence, write_sequence, Family, GeneratorConfig};
use udinc::geometry::{euclidean_distance, torus_distance};
use udinc::incidence::{
    count_annulus_pairs_checkpoints, count_annulus_pairs_grid,
    count_annulus_pairs_grid_checkpoints, count_slab_pairs, count_slab_pairs_checkpoints,
};
use udinc::rng::seeded_rng;
use udinc::{Exec, Point};

fn random_point(rng: &mut impl Rng, d: usize) -> Point {
    Point::new(
        (0..d)
            .map(|_| rng.random_range(-2.0..3.0))
            .collect::<Vec<f64>>(),
    )
    .unwrap()
}

#[test]
fn torus_distance_is_a_metric() {
    let mut rng = seeded_rng(11, 0);
    for i in 0..10_000 {
        let d = 1 + i % 4;
        let (x, y, z) = (
            random_point(&mut rng, d),
            random_point(&mut rng, d),
            random_point(&mut rng, d),
        );
        let xy = torus_distance(&x, &y).unwrap();
        let yz = torus_distance(&y, &z).unwrap();
        let xz = torus_distance(&x, &z).unwrap();
        assert!(xz <= xy + yz + 1e-12);
        assert_eq!(xy, torus_distance(&y, &x).unwrap());
        assert!(xy <= 0.5 * (d as f64).sqrt() + 1e-12);
        assert!(xy <= euclidean_distance(&x, &y).unwrap() + 1e-12);
    }
}

#[test]
fn grid_and_brute_agree_at_every_checkpoint() {
    let mut rng = seeded_rng(12, 0);
    for case in 0..100 {
        let d = 2 + case % 3;
        let n = rng.random_range(50..800);
        let a = rng.random_range(0.01..0.4);
        let b = rng.random_range(a..0.49);
        let family = match case % 4 {
            0 => Family::Iid,
            1 => Family::Halton { bases: None },
            2 => Family::Lattice { side: 7 },
            _ => Family::Clustered {
                clusters: 3,
                radius: 0.05,
            },
        };
        let seq = generate(&GeneratorConfig::new(family, d, case as u64), n).unwrap();
        let cps = [n / 4, n / 2, n];
        let brute = count_annulus_pairs_checkpoints(&seq, a, b, &cps, Exec::Parallel).unwrap();
        let grid = count_annulus_pairs_grid_checkpoints(&seq, a, b, &cps, Exec::Parallel).unwrap();
        assert_eq!(brute, grid, "case {case}: d={d} n={n} [{a}, {b}]");
        assert_eq!(
            grid[2],
            count_annulus_pairs_grid(&seq, a, b, n, Exec::Sequential).unwrap()
        );
    }
}

#[test]
fn slab_checkpoints_match_single_counts() {
    let v = generate(&GeneratorConfig::iid(3, 1), 900).unwrap();
    let w = generate(&GeneratorConfig::iid(3, 2), 900).unwrap();
    let cps = [100, 400, 900];
    let all = count_slab_pairs_checkpoints(&v, &w, 0.4, 0.8, &cps, Exec::Parallel).unwrap();
    for (&n, c) in cps.iter().zip(&all) {
        let single = count_slab_pairs(&v, &w, 0.4, 0.8, n, Exec::Sequential).unwrap();
        assert!((single - c).abs() <= 1e-12 * c.abs().max(1.0));
    }
}

#[test]
fn sequences_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    let seq = generate(
        &GeneratorConfig::new(Family::Kronecker { alpha: None }, 3, 0),
        257,
    )
    .unwrap();
    write_sequence(&seq, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_sequence(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(back.flat(), seq.flat());
    assert_eq!(back.dim(), 3);
}
