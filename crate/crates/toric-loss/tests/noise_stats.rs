//! Statistical and property checks of the noise sampler.

mod common;

use proptest::prelude::*;
use toric_loss::lattice::TorusSize;
use toric_loss::noise::{sample_errors, NoiseParams, TrialSeed};

#[test]
fn marginal_rates_match_binomial_statistics() {
    // 10⁴ trials at (p_loss, p_com) = (0.3, 0.1) on L = 16: sample means
    // within 3 standard errors of the binomial expectations.
    let size = TorusSize::new(16);
    let edges = size.edge_count() as f64;
    let (p_loss, p_com) = (0.3, 0.1);
    let params = NoiseParams::new(p_loss, p_com).unwrap();
    let trials = 10_000u64;

    let mut lost_total = 0u64;
    let mut flip_total = 0u64;
    for t in 0..trials {
        let sample = common::random_sample(params, size, 5000, t);
        lost_total += sample.lost.count() as u64;
        flip_total += sample.flipped.count() as u64;
    }
    let mean_lost = lost_total as f64 / trials as f64;
    let mean_flip = flip_total as f64 / trials as f64;

    let expect_lost = edges * p_loss;
    let se_lost = (edges * p_loss * (1.0 - p_loss) / trials as f64).sqrt();
    assert!(
        (mean_lost - expect_lost).abs() < 3.0 * se_lost,
        "mean lost {mean_lost} vs {expect_lost} ± {se_lost}"
    );

    // |flipped| is binomial over survivors: total variance has a between-
    // trial term from the fluctuating survivor count.
    let q = 1.0 - p_loss;
    let expect_flip = edges * q * p_com;
    let var_flip = edges * q * p_com * (1.0 - p_com) + p_com * p_com * edges * q * (1.0 - q);
    let se_flip = (var_flip / trials as f64).sqrt();
    assert!(
        (mean_flip - expect_flip).abs() < 3.0 * se_flip,
        "mean flipped {mean_flip} vs {expect_flip} ± {se_flip}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_deterministic_and_disjoint(
        l in 2u32..10,
        p_loss in 0.0f64..1.0,
        p_com in 0.0f64..0.5,
        master in any::<u64>(),
        trial in 0u64..1000,
    ) {
        let size = TorusSize::new(l);
        let params = NoiseParams::new(p_loss, p_com).unwrap();
        let seed = TrialSeed { master_seed: master, trial_index: trial };
        let a = sample_errors(params, size, seed);
        let b = sample_errors(params, size, seed);
        prop_assert_eq!(&a.lost, &b.lost);
        prop_assert_eq!(&a.flipped, &b.flipped);
        prop_assert!(!a.lost.intersects(&a.flipped));
    }

    #[test]
    fn syndrome_defect_count_is_even(
        l in 3u32..10,
        p_loss in 0.0f64..0.5,
        p_com in 0.0f64..0.4,
        trial in 0u64..10_000,
    ) {
        let size = TorusSize::new(l);
        let params = NoiseParams::new(p_loss, p_com).unwrap();
        let sample = sample_errors(params, size, TrialSeed { master_seed: 52, trial_index: trial });
        let partition = toric_loss::loss::build_partition(&sample.lost, size);
        let syndrome = toric_loss::syndrome::compute_syndrome(&sample, &partition, size);
        prop_assert_eq!(syndrome.defects.len() % 2, 0);
    }
}
