//! Defect extraction: superplaquettes whose merged stabiliser anticommutes
//! with the sampled error chain.

use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::{plaquettes_of_edge, EdgeId, TorusSize};
use crate::loss::SuperplaquettePartition;
use crate::noise::ErrorSample;

/// The measured defect set `∂E`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Syndrome {
    /// Region indices (into `partition.regions()`) with odd boundary
    /// parity, ascending. Always even in number.
    pub defects: Vec<u32>,
}

impl Syndrome {
    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Each flipped edge toggles the parity of its two fine plaquettes; fine
/// parities then fold (XOR) over each region. Flips internal to a region
/// toggle it twice and cancel.
pub fn compute_syndrome(
    sample: &ErrorSample,
    partition: &SuperplaquettePartition,
    size: TorusSize,
) -> Syndrome {
    debug_assert!(!sample.lost.intersects(&sample.flipped));
    let mut parity = vec![false; size.plaquette_count()];
    for index in sample.flipped.iter_indices() {
        let [p, q] = plaquettes_of_edge(EdgeId::from_index(index, size), size);
        parity[p.index(size)] ^= true;
        parity[q.index(size)] ^= true;
    }
    let mut region_parity = vec![false; partition.region_count()];
    for (pi, &odd) in parity.iter().enumerate() {
        if odd {
            region_parity[partition.region_of_index(pi)] ^= true;
        }
    }
    let defects: Vec<u32> = region_parity
        .iter()
        .enumerate()
        .filter(|(_, &odd)| odd)
        .map(|(i, _)| i as u32)
        .collect();
    debug_assert!(defects.len() % 2 == 0);
    Syndrome { defects }
}
