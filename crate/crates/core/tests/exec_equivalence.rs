use udinc::generators::{generate, Family, GeneratorConfig};
use udinc::harness::{scaling_sweep, ExperimentConfig};
use udinc::incidence::{difference_set_count, discrete_energy, slab_main_term};
use udinc::weyl::{adversarial_frequency, weyl_profile, FrequencySpec};
use udinc::{Exec, Metric, RegionSpec};

#[test]
fn weyl_sums_match_bitwise() {
    let seq = generate(
        &GeneratorConfig::new(Family::Halton { bases: None }, 2, 0),
        3000,
    )
    .unwrap();
    let freq = FrequencySpec::new(2, 5).unwrap();
    let cps = [100, 1000, 3000];
    let a = weyl_profile(&seq, &freq, &cps, 0.1, Exec::Sequential).unwrap();
    let b = weyl_profile(&seq, &freq, &cps, 0.1, Exec::Parallel).unwrap();
    for k in 0..freq.len() {
        for c in 0..cps.len() {
            assert_eq!(a.sum(k, c), b.sum(k, c));
        }
    }
}

#[test]
fn pair_statistics_match_bitwise() {
    let seq = generate(&GeneratorConfig::iid(2, 5), 1500).unwrap();
    let run = |exec| {
        (
            discrete_energy(&seq, 0.7, 1500, Metric::Torus, exec).unwrap(),
            difference_set_count(&seq, 300, 1e-9, exec).unwrap(),
            slab_main_term(0.5, 0.7, 2, 200_000, 3, exec).unwrap(),
            adversarial_frequency(&seq.flat()[..4], 0.1, 300_000, u64::MAX, exec).unwrap(),
        )
    };
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
}

#[test]
fn sweeps_match_bitwise() {
    for region in [
        RegionSpec::annulus(0.2, 0.3).unwrap(),
        RegionSpec::slab(0.5, 0.7).unwrap(),
    ] {
        let mut cfg = ExperimentConfig::new(
            GeneratorConfig::iid(2, 0),
            region,
            vec![256, 512, 1024],
            vec![0, 1, 2],
        );
        cfg.main_term_samples = 100_000;
        let a = scaling_sweep(&cfg, Exec::Sequential).unwrap();
        let b = scaling_sweep(&cfg, Exec::Parallel).unwrap();
        assert_eq!(a.fit.to_json().unwrap(), b.fit.to_json().unwrap());
        assert_eq!(a.rows, b.rows);
    }
}
