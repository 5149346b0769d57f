//! Trial verdicts: close the residual chain `E Δ E′` inside each
//! superplaquette and read off its winding parities.
//!
//! Residual chains are closed 1-chains on the dual lattice (every fine
//! plaquette sees an even number of chain edges) once the odd plaquettes
//! left inside superplaquette regions are paired up through paths of the
//! region's *lost* edges. Lost edges span each region by construction, and
//! restricting closures to them keeps the class well defined: two closures
//! differ by a lost-bond cycle, contractible whenever the region does not
//! wind the torus, and deformed logical operators never touch lost qubits,
//! so the crossing parity is exactly the physical flip parity. (Surviving
//! region-internal edges also weigh zero for the decoder, but a closure
//! through them could wind the torus even when no region wraps.) Winding is
//! counted as chain crossings of one vertical and one horizontal test line;
//! odd crossing of either means a logical error.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{
    edges_of_plaquette, plaquettes_of_edge, EdgeId, EdgeSet, Orientation, PlaquetteId, TorusSize,
};
use crate::loss::{loss_recoverable, SuperplaquettePartition};
use crate::noise::ErrorSample;

/// Winding parities of a closed chain around the two torus directions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HomologyClass {
    pub wind_x: bool,
    pub wind_y: bool,
}

impl HomologyClass {
    pub fn is_trivial(self) -> bool {
        !self.wind_x && !self.wind_y
    }
}

/// How [`close_chain_with`] pairs the odd plaquettes inside a region.
/// All strategies give the same homology class when no region wraps; the
/// alternatives exist so tests can check exactly that.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ClosureStrategy {
    /// Breadth-first from the region representative; pair odd plaquettes
    /// in discovery order.
    #[default]
    BfsPairing,
    /// Breadth-first from the region's last member; pair odd plaquettes in
    /// reverse discovery order.
    ReverseBfsPairing,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureError {
    /// A region saw an odd number of odd-parity plaquettes, i.e. the
    /// region-level boundary of the input chain was not empty.
    UnpairedDefect { region: usize, odd_count: usize },
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::UnpairedDefect { region, odd_count } => write!(
                f,
                "region {region} has {odd_count} odd plaquettes; region-level boundary not empty"
            ),
        }
    }
}

impl core::error::Error for ClosureError {}

/// Close `chain` to empty fine-level boundary by pairing odd plaquettes
/// within each region and joining each pair through the region's lost
/// edges.
pub fn close_chain(
    chain: &EdgeSet,
    partition: &SuperplaquettePartition,
    size: TorusSize,
) -> Result<EdgeSet, ClosureError> {
    close_chain_with(chain, partition, size, ClosureStrategy::BfsPairing)
}

pub fn close_chain_with(
    chain: &EdgeSet,
    partition: &SuperplaquettePartition,
    size: TorusSize,
    strategy: ClosureStrategy,
) -> Result<EdgeSet, ClosureError> {
    let plaquettes = size.plaquette_count();
    let mut parity = vec![false; plaquettes];
    for index in chain.iter_indices() {
        let [p, q] = plaquettes_of_edge(EdgeId::from_index(index, size), size);
        parity[p.index(size)] ^= true;
        parity[q.index(size)] ^= true;
    }

    let mut closed = chain.clone();

    // BFS scratch, epoch-marked per region.
    let mut visited = vec![u32::MAX; plaquettes];
    let mut parent_edge = vec![u32::MAX; plaquettes];
    let mut parent_node = vec![u32::MAX; plaquettes];
    let mut depth = vec![0u32; plaquettes];
    let mut queue: Vec<usize> = Vec::new();

    for (ridx, region) in partition.regions().iter().enumerate() {
        let odd_count = region
            .members
            .iter()
            .filter(|m| parity[m.index(size)])
            .count();
        if odd_count == 0 {
            continue;
        }
        if odd_count % 2 != 0 {
            return Err(ClosureError::UnpairedDefect {
                region: ridx,
                odd_count,
            });
        }

        let root = match strategy {
            ClosureStrategy::BfsPairing => region.rep,
            ClosureStrategy::ReverseBfsPairing => *region.members.last().unwrap(),
        };
        let epoch = ridx as u32;
        queue.clear();
        let root_index = root.index(size);
        visited[root_index] = epoch;
        parent_edge[root_index] = u32::MAX;
        parent_node[root_index] = u32::MAX;
        depth[root_index] = 0;
        queue.push(root_index);

        let mut odd_in_order: Vec<usize> = Vec::with_capacity(odd_count);
        let mut head = 0;
        while head < queue.len() {
            let node = queue[head];
            head += 1;
            if parity[node] {
                odd_in_order.push(node);
            }
            let p = PlaquetteId::from_index(node, size);
            for e in edges_of_plaquette(p, size) {
                if !partition.lost().contains(e) {
                    continue;
                }
                let [a, b] = plaquettes_of_edge(e, size);
                let (ai, bi) = (a.index(size), b.index(size));
                let nb = if ai == node { bi } else { ai };
                if visited[nb] == epoch {
                    continue;
                }
                debug_assert_eq!(partition.region_of_index(nb), ridx);
                visited[nb] = epoch;
                parent_edge[nb] = e.index(size) as u32;
                parent_node[nb] = node as u32;
                depth[nb] = depth[node] + 1;
                queue.push(nb);
            }
        }
        debug_assert_eq!(queue.len(), region.members.len(), "region not connected");

        if matches!(strategy, ClosureStrategy::ReverseBfsPairing) {
            odd_in_order.reverse();
        }
        for pair in odd_in_order.chunks_exact(2) {
            let (mut u, mut v) = (pair[0], pair[1]);
            while depth[u] > depth[v] {
                closed.toggle_index(parent_edge[u] as usize);
                u = parent_node[u] as usize;
            }
            while depth[v] > depth[u] {
                closed.toggle_index(parent_edge[v] as usize);
                v = parent_node[v] as usize;
            }
            while u != v {
                closed.toggle_index(parent_edge[u] as usize);
                closed.toggle_index(parent_edge[v] as usize);
                u = parent_node[u] as usize;
                v = parent_node[v] as usize;
            }
        }
    }

    debug_assert!(fine_boundary_is_empty(&closed, size));
    Ok(closed)
}

/// True when every fine plaquette borders an even number of chain edges.
pub fn fine_boundary_is_empty(chain: &EdgeSet, size: TorusSize) -> bool {
    let mut parity = vec![false; size.plaquette_count()];
    for index in chain.iter_indices() {
        let [p, q] = plaquettes_of_edge(EdgeId::from_index(index, size), size);
        parity[p.index(size)] ^= true;
        parity[q.index(size)] ^= true;
    }
    parity.iter().all(|&b| !b)
}

/// Crossing parities of a closed chain with the test lines through
/// `cut_x` / `cut_y`: vertical edges `(cut_x, ·)` cross the vertical line,
/// horizontal edges `(·, cut_y)` cross the horizontal line. Independent of
/// the cut position for closed chains.
pub fn winding_with_cuts(
    chain: &EdgeSet,
    size: TorusSize,
    cut_x: u32,
    cut_y: u32,
) -> HomologyClass {
    debug_assert!(fine_boundary_is_empty(chain, size));
    let mut wind_x = false;
    let mut wind_y = false;
    for y in 0..size.l() {
        if chain.contains(EdgeId::new(cut_x, y, Orientation::Vertical, size)) {
            wind_x = !wind_x;
        }
    }
    for x in 0..size.l() {
        if chain.contains(EdgeId::new(x, cut_y, Orientation::Horizontal, size)) {
            wind_y = !wind_y;
        }
    }
    HomologyClass { wind_x, wind_y }
}

/// Winding with the test lines fixed at the origin.
pub fn winding(chain: &EdgeSet, size: TorusSize) -> HomologyClass {
    winding_with_cuts(chain, size, 0, 0)
}

/// Verdict of one decoded trial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrialOutcome {
    Success,
    /// The residual chain `E Δ E′` winds the torus: a logical error.
    LogicalFailure,
    /// A loss region percolates around the torus; no deformed logical
    /// operator survives and decoding is not attempted.
    LossFailure,
}

impl fmt::Display for TrialOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrialOutcome::Success => "Success",
            TrialOutcome::LogicalFailure => "LogicalFailure",
            TrialOutcome::LossFailure => "LossFailure",
        };
        f.write_str(s)
    }
}

/// Judge a trial given the sampled errors and the decoder's correction.
pub fn trial_outcome(
    sample: &ErrorSample,
    partition: &SuperplaquettePartition,
    correction: &EdgeSet,
    size: TorusSize,
) -> TrialOutcome {
    if !loss_recoverable(partition) {
        return TrialOutcome::LossFailure;
    }
    let residual = sample.flipped.symmetric_difference(correction);
    let closed = close_chain(&residual, partition, size)
        .expect("decoder left a region-level defect open");
    if winding(&closed, size).is_trivial() {
        TrialOutcome::Success
    } else {
        TrialOutcome::LogicalFailure
    }
}
