//! Homology verdict oracles: closure-choice independence, full
//! stabiliser-level correctability of successful trials, cut invariance,
//! and the known undetectable-error classes.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_loss::homology::{
    close_chain_with, fine_boundary_is_empty, trial_outcome, winding, winding_with_cuts,
    ClosureStrategy,
};
use toric_loss::lattice::{edges_of_star, EdgeId, EdgeSet, Orientation, StarId, TorusSize};
use toric_loss::loss::build_partition;
use toric_loss::noise::NoiseParams;
use toric_loss::trial::{run_point, run_trial_detailed, GridPoint};
use toric_loss::{TrialOutcome, TrialSeed};

#[test]
fn closure_choice_does_not_change_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(4001);
    let mut checked = 0;
    let mut trial = 0u64;
    while checked < 2000 {
        trial += 1;
        let l = rng.gen_range(3..=8);
        let size = TorusSize::new(l);
        let params = NoiseParams::new(rng.gen_range(0.05..0.45), rng.gen_range(0.05..0.3))
            .unwrap();
        let record = run_trial_detailed(
            params,
            size,
            TrialSeed {
                master_seed: 4100,
                trial_index: trial,
            },
        );
        if record.outcome == TrialOutcome::LossFailure {
            continue;
        }
        let residual = record
            .sample
            .flipped
            .symmetric_difference(&record.correction.as_ref().unwrap().edges);
        let a = close_chain_with(&residual, &record.partition, size, ClosureStrategy::BfsPairing)
            .unwrap();
        let b = close_chain_with(
            &residual,
            &record.partition,
            size,
            ClosureStrategy::ReverseBfsPairing,
        )
        .unwrap();
        assert!(fine_boundary_is_empty(&a, size));
        assert!(fine_boundary_is_empty(&b, size));
        assert_eq!(winding(&a, size), winding(&b, size), "trial {trial}");
        checked += 1;
    }
}

#[test]
fn success_implies_full_corrigibility() {
    // Apply E, E′ and the closure edges as corrections from scratch: every
    // fine plaquette parity returns to +1 and all cut parities vanish.
    let mut rng = ChaCha8Rng::seed_from_u64(4002);
    let mut successes = 0;
    let mut trial = 0u64;
    while successes < 500 {
        trial += 1;
        let l = rng.gen_range(3..=6);
        let size = TorusSize::new(l);
        let params = NoiseParams::new(rng.gen_range(0.0..0.3), rng.gen_range(0.02..0.15))
            .unwrap();
        let record = run_trial_detailed(
            params,
            size,
            TrialSeed {
                master_seed: 4200,
                trial_index: trial,
            },
        );
        if record.outcome != TrialOutcome::Success {
            continue;
        }
        let residual = record
            .sample
            .flipped
            .symmetric_difference(&record.correction.as_ref().unwrap().edges);
        let closed =
            close_chain_with(&residual, &record.partition, size, ClosureStrategy::BfsPairing)
                .unwrap();
        assert!(fine_boundary_is_empty(&closed, size));
        for cut in 0..size.l() {
            let class = winding_with_cuts(&closed, size, cut, cut);
            assert!(class.is_trivial(), "trial {trial} cut {cut}");
        }
        successes += 1;
    }
}

#[test]
fn winding_cut_invariance_on_random_closed_chains() {
    // Closed chains generated as star-boundary sums plus optional logical
    // cycles; the crossing parity must not depend on the cut position.
    let mut rng = ChaCha8Rng::seed_from_u64(4003);
    let size = TorusSize::new(4);
    for trial in 0..500 {
        let mut chain = EdgeSet::empty(size);
        for si in 0..size.star_count() {
            if rng.gen::<bool>() {
                for e in edges_of_star(StarId::from_index(si, size), size) {
                    chain.toggle(e);
                }
            }
        }
        let expect_x = rng.gen::<bool>();
        let expect_y = rng.gen::<bool>();
        if expect_x {
            // A row of vertical edges: the dual path circling in x.
            for x in 0..size.l() {
                chain.toggle(EdgeId::new(x, 1, Orientation::Vertical, size));
            }
        }
        if expect_y {
            // A column of horizontal edges: the dual path circling in y.
            for y in 0..size.l() {
                chain.toggle(EdgeId::new(2, y, Orientation::Horizontal, size));
            }
        }
        assert!(fine_boundary_is_empty(&chain, size));
        let reference = winding(&chain, size);
        assert_eq!(reference.wind_x, expect_x, "trial {trial}");
        assert_eq!(reference.wind_y, expect_y, "trial {trial}");
        for cx in 0..size.l() {
            for cy in 0..size.l() {
                assert_eq!(winding_with_cuts(&chain, size, cx, cy), reference);
            }
        }
    }
}

#[test]
fn undetectable_logical_error_fails() {
    // A full nontrivial cycle has empty syndrome, so E′ = ∅; the verdict
    // must still be a logical failure.
    let size = TorusSize::new(6);
    let mut flipped = EdgeSet::empty(size);
    for y in 0..size.l() {
        flipped.insert(EdgeId::new(3, y, Orientation::Horizontal, size));
    }
    let sample = toric_loss::ErrorSample {
        lost: EdgeSet::empty(size),
        flipped,
    };
    let partition = build_partition(&sample.lost, size);
    let syndrome = toric_loss::syndrome::compute_syndrome(&sample, &partition, size);
    assert!(syndrome.is_empty());
    let outcome = trial_outcome(&sample, &partition, &EdgeSet::empty(size), size);
    assert_eq!(outcome, TrialOutcome::LogicalFailure);
}

#[test]
fn empty_trial_succeeds() {
    let size = TorusSize::new(4);
    let sample = toric_loss::ErrorSample {
        lost: EdgeSet::empty(size),
        flipped: EdgeSet::empty(size),
    };
    let partition = build_partition(&sample.lost, size);
    let outcome = trial_outcome(&sample, &partition, &EdgeSet::empty(size), size);
    assert_eq!(outcome, TrialOutcome::Success);
}

#[test]
fn percolating_loss_row_is_a_loss_failure() {
    let size = TorusSize::new(5);
    let mut lost = EdgeSet::empty(size);
    for x in 0..size.l() {
        lost.insert(EdgeId::new(x, 1, Orientation::Vertical, size));
    }
    // Any flips on the survivors; verdict ignores them.
    let mut flipped = EdgeSet::empty(size);
    flipped.insert(EdgeId::new(0, 3, Orientation::Horizontal, size));
    let sample = toric_loss::ErrorSample { lost, flipped };
    let partition = build_partition(&sample.lost, size);
    let outcome = trial_outcome(&sample, &partition, &EdgeSet::empty(size), size);
    assert_eq!(outcome, TrialOutcome::LossFailure);
}

#[test]
fn deep_subcritical_failure_rate_is_tiny() {
    // p_com = 0.01 at L = 16 sits far inside the correctable phase.
    let point = GridPoint {
        p_loss: 0.0,
        p_com: 0.01,
        l: 16,
        trials: 2000,
    };
    let result = run_point(&point, 4400);
    assert!(
        result.p_fail(toric_loss::Accounting::Combined) < 0.01,
        "p_fail = {}",
        result.p_fail(toric_loss::Accounting::Combined)
    );
}
