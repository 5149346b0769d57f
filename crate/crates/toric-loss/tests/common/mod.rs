//! Helpers shared by the oracle test suites.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_loss::lattice::{EdgeId, EdgeSet, TorusSize};
use toric_loss::noise::{sample_errors, NoiseParams, TrialSeed};
use toric_loss::ErrorSample;

/// A random error sample drawn through the crate's own generator.
pub fn random_sample(params: NoiseParams, size: TorusSize, master: u64, t: u64) -> ErrorSample {
    sample_errors(
        params,
        size,
        TrialSeed {
            master_seed: master,
            trial_index: t,
        },
    )
}

/// An arbitrary edge set with independent membership probability `p`,
/// drawn from a test-local generator.
pub fn random_edge_set(rng: &mut ChaCha8Rng, size: TorusSize, p: f64) -> EdgeSet {
    let mut set = EdgeSet::empty(size);
    for i in 0..size.edge_count() {
        if rng.gen::<f64>() < p {
            set.toggle_index(i);
        }
    }
    set
}

/// Region-level boundary parity of an edge set, computed from scratch:
/// the independent check that a chain closes at superplaquette level.
pub fn region_boundary_is_empty(
    chain: &EdgeSet,
    partition: &toric_loss::loss::SuperplaquettePartition,
    size: TorusSize,
) -> bool {
    let mut parity = vec![false; partition.region_count()];
    for index in chain.iter_indices() {
        let [p, q] = toric_loss::lattice::plaquettes_of_edge(EdgeId::from_index(index, size), size);
        parity[partition.region_of(p)] ^= true;
        parity[partition.region_of(q)] ^= true;
    }
    parity.iter().all(|&b| !b)
}
