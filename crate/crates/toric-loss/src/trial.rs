//! The per-trial pipeline and sequential grid-point execution.
//!
//! Parallel drivers belong to the companion CLI crate; everything here is
//! pure, so a grid point's result depends only on `(point, master_seed)`
//! however the trials are scheduled.

use alloc::vec::Vec;

use crate::decoder::{correction_chain, defect_distances, min_weight_matching, CorrectionChain};
use crate::homology::{trial_outcome, TrialOutcome};
use crate::lattice::TorusSize;
use crate::loss::{
    build_degraded_graph, build_partition, build_restored_lattice, loss_recoverable,
    RestoredLattice, Superedge, SuperplaquettePartition,
};
use crate::math;
use crate::noise::{sample_errors, splitmix64, ErrorSample, NoiseParams, TrialSeed};
use crate::syndrome::{compute_syndrome, Syndrome};

/// One cell of the simulation grid.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GridPoint {
    pub p_loss: f64,
    pub p_com: f64,
    pub l: u32,
    pub trials: u64,
}

/// Which failures count towards `p_fail`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Accounting {
    /// Logical failures plus loss-percolation failures.
    #[default]
    Combined,
    /// Logical failures only; percolated-loss trials still appear in
    /// `n_loss_fail` but not in `p_fail`.
    LogicalOnly,
}

/// Aggregated outcome counts for one grid point.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GridResult {
    pub point: GridPoint,
    pub n_logical_fail: u64,
    pub n_loss_fail: u64,
    pub n_success: u64,
    /// The run-level master seed (not the per-point derived seed).
    pub master_seed: u64,
}

impl GridResult {
    pub fn trials(&self) -> u64 {
        self.n_logical_fail + self.n_loss_fail + self.n_success
    }

    fn fail_count(&self, accounting: Accounting) -> u64 {
        match accounting {
            Accounting::Combined => self.n_logical_fail + self.n_loss_fail,
            Accounting::LogicalOnly => self.n_logical_fail,
        }
    }

    pub fn p_fail(&self, accounting: Accounting) -> f64 {
        self.fail_count(accounting) as f64 / self.trials() as f64
    }

    /// Binomial standard error `sqrt(p(1−p)/n)`.
    pub fn stderr(&self, accounting: Accounting) -> f64 {
        let p = self.p_fail(accounting);
        math::sqrt(p * (1.0 - p) / self.trials() as f64)
    }

    /// Wilson score interval, robust at small counts.
    pub fn wilson_interval(&self, accounting: Accounting, z: f64) -> (f64, f64) {
        let n = self.trials() as f64;
        let p = self.p_fail(accounting);
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = z * math::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        (
            (centre - half).max(0.0),
            (centre + half).min(1.0),
        )
    }
}

/// Per-point seed: the run master seed mixed with the point coordinates
/// (trials excluded, so extending a run reuses its earlier trials).
pub fn point_seed(master_seed: u64, point: &GridPoint) -> u64 {
    let mut state = master_seed;
    let mut mixed = splitmix64(&mut state);
    for word in [
        point.p_loss.to_bits(),
        point.p_com.to_bits(),
        point.l as u64,
    ] {
        state = mixed ^ word;
        mixed = splitmix64(&mut state);
    }
    mixed
}

/// Everything one trial produced; the `Option` stages are `None` when the
/// pipeline short-circuits (percolated loss, or no defects to match).
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub sample: ErrorSample,
    pub partition: SuperplaquettePartition,
    pub syndrome: Option<Syndrome>,
    pub superedges: Option<Vec<Superedge>>,
    pub restored: Option<RestoredLattice>,
    pub correction: Option<CorrectionChain>,
    pub outcome: TrialOutcome,
}

/// Run one trial keeping all intermediate structures.
pub fn run_trial_detailed(params: NoiseParams, size: TorusSize, seed: TrialSeed) -> TrialRecord {
    let sample = sample_errors(params, size, seed);
    let partition = build_partition(&sample.lost, size);

    if !loss_recoverable(&partition) {
        return TrialRecord {
            sample,
            partition,
            syndrome: None,
            superedges: None,
            restored: None,
            correction: None,
            outcome: TrialOutcome::LossFailure,
        };
    }

    let syndrome = compute_syndrome(&sample, &partition, size);
    let (superedges, restored, correction) = if syndrome.is_empty() {
        (None, None, CorrectionChain::empty(size))
    } else {
        // Defects present imply flips present, hence p_com > 0 and finite
        // weights.
        let superedges = build_degraded_graph(&partition, &sample.lost, params, size)
            .expect("defects imply p_com > 0");
        let restored = build_restored_lattice(&partition, &superedges, size);
        let graph = defect_distances(&syndrome, &partition, &restored, size);
        let pairs = min_weight_matching(&graph);
        let correction = correction_chain(&pairs, &graph);
        (Some(superedges), Some(restored), correction)
    };

    let outcome = trial_outcome(&sample, &partition, &correction.edges, size);
    TrialRecord {
        sample,
        partition,
        syndrome: Some(syndrome),
        superedges,
        restored,
        correction: Some(correction),
        outcome,
    }
}

/// Run one trial, returning only its verdict.
pub fn run_trial(params: NoiseParams, size: TorusSize, seed: TrialSeed) -> TrialOutcome {
    run_trial_detailed(params, size, seed).outcome
}

/// Outcome of the trial `trial_index` of `point` under `master_seed`.
pub fn run_point_trial(point: &GridPoint, master_seed: u64, trial_index: u64) -> TrialOutcome {
    let params = NoiseParams::new(point.p_loss, point.p_com).expect("validated grid point");
    let size = TorusSize::new(point.l);
    run_trial(
        params,
        size,
        TrialSeed {
            master_seed: point_seed(master_seed, point),
            trial_index,
        },
    )
}

/// Sequential reference execution of a grid point.
pub fn run_point(point: &GridPoint, master_seed: u64) -> GridResult {
    let mut result = GridResult {
        point: *point,
        n_logical_fail: 0,
        n_loss_fail: 0,
        n_success: 0,
        master_seed,
    };
    for t in 0..point.trials {
        match run_point_trial(point, master_seed, t) {
            TrialOutcome::Success => result.n_success += 1,
            TrialOutcome::LogicalFailure => result.n_logical_fail += 1,
            TrialOutcome::LossFailure => result.n_loss_fail += 1,
        }
    }
    result
}
