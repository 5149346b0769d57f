//! Monte Carlo drivers: a bounded worker pool over independent trials.
//!
//! Every trial is seeded by `(master_seed, point, trial_index)` alone and
//! outcome counts commute, so results are bit-identical for any worker
//! count or scheduling order.

use toric_loss::lattice::TorusSize;
use toric_loss::loss::{build_partition, loss_recoverable};
use toric_loss::noise::{sample_errors, NoiseParams, TrialSeed};
use toric_loss::trial::{point_seed, run_point_trial, GridPoint, GridResult};
use toric_loss::TrialOutcome;

/// Environment variable consulted when `--workers` is not given.
pub const WORKERS_ENV: &str = "TORIC_LOSS_WORKERS";

/// Worker count precedence: explicit flag, then [`WORKERS_ENV`], then the
/// machine's available parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&w| w >= 1)
    })
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}

/// Tally trial outcomes `0..trials` over a worker pool; returns
/// `(n_success, n_logical_fail, n_loss_fail)`.
fn parallel_tally<F>(trials: u64, workers: usize, eval: F) -> (u64, u64, u64)
where
    F: Fn(u64) -> TrialOutcome + Sync,
{
    let workers = workers.max(1).min(trials.max(1) as usize);
    let chunk = trials.div_ceil(workers as u64);
    let eval = &eval;
    let mut tallies = vec![(0u64, 0u64, 0u64); workers];
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (w, tally) in tallies.iter_mut().enumerate() {
            let lo = w as u64 * chunk;
            let hi = (lo + chunk).min(trials);
            handles.push(scope.spawn(move || {
                for t in lo..hi {
                    match eval(t) {
                        TrialOutcome::Success => tally.0 += 1,
                        TrialOutcome::LogicalFailure => tally.1 += 1,
                        TrialOutcome::LossFailure => tally.2 += 1,
                    }
                }
            }));
        }
        for h in handles {
            h.join().expect("trial worker panicked");
        }
    });
    tallies
        .into_iter()
        .fold((0, 0, 0), |acc, t| (acc.0 + t.0, acc.1 + t.1, acc.2 + t.2))
}

/// Run every grid point; output order follows input order.
pub fn run_grid(points: &[GridPoint], master_seed: u64, workers: usize) -> Vec<GridResult> {
    points
        .iter()
        .map(|point| {
            let (n_success, n_logical_fail, n_loss_fail) =
                parallel_tally(point.trials, workers, |t| {
                    run_point_trial(point, master_seed, t)
                });
            GridResult {
                point: *point,
                n_logical_fail,
                n_loss_fail,
                n_success,
                master_seed,
            }
        })
        .collect()
}

/// One cell of a pure-loss sweep.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PercolationPoint {
    pub p_loss: f64,
    pub l: u32,
    pub trials: u64,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PercolationResult {
    pub point: PercolationPoint,
    pub n_recoverable: u64,
    pub master_seed: u64,
}

impl PercolationResult {
    pub fn p_recover(&self) -> f64 {
        self.n_recoverable as f64 / self.point.trials as f64
    }

    pub fn stderr(&self) -> f64 {
        let p = self.p_recover();
        (p * (1.0 - p) / self.point.trials as f64).sqrt()
    }
}

/// Pure-loss sweep: no flips, no decoding, just the wrap check.
pub fn run_percolation(
    points: &[PercolationPoint],
    master_seed: u64,
    workers: usize,
) -> Vec<PercolationResult> {
    points
        .iter()
        .map(|point| {
            // Seeded like the equivalent (p_loss, p_com = 0) grid point so
            // sweeps and percolation runs share trial streams.
            let grid_point = GridPoint {
                p_loss: point.p_loss,
                p_com: 0.0,
                l: point.l,
                trials: point.trials,
            };
            let seed = point_seed(master_seed, &grid_point);
            let params = NoiseParams::new(point.p_loss, 0.0).expect("validated p_loss");
            let size = TorusSize::new(point.l);
            let (n_recoverable, _, _) = parallel_tally(point.trials, workers, |t| {
                let sample = sample_errors(
                    params,
                    size,
                    TrialSeed {
                        master_seed: seed,
                        trial_index: t,
                    },
                );
                let partition = build_partition(&sample.lost, size);
                if loss_recoverable(&partition) {
                    TrialOutcome::Success
                } else {
                    TrialOutcome::LossFailure
                }
            });
            PercolationResult {
                point: *point,
                n_recoverable,
                master_seed,
            }
        })
        .collect()
}
