//! Maximum-likelihood correction: all-pairs shortest paths between defects
//! on the restored lattice, exact minimum-weight perfect matching, and the
//! correction chain realised by the matched paths.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::lattice::{edges_of_plaquette, plaquettes_of_edge, EdgeId, EdgeSet, TorusSize};
use crate::loss::{RestoredLattice, SuperplaquettePartition, WEIGHT_SCALE};
use crate::matching;
use crate::syndrome::Syndrome;

const NO_PRED: u32 = u32::MAX;

/// Complete graph over the defect superplaquettes: exact shortest-path
/// distances plus the predecessor trees realising them.
#[derive(Clone, Debug)]
pub struct DefectGraph {
    size: TorusSize,
    /// Region indices of the defects, ascending (syndrome order).
    pub nodes: Vec<u32>,
    /// Dense plaquette index of each defect region's representative.
    sources: Vec<usize>,
    /// Row-major `n × n` distance matrix.
    dist: Vec<f64>,
    /// Per node, the incoming edge of each plaquette in its shortest-path
    /// tree (`NO_PRED` at the source).
    pred: Vec<Vec<u32>>,
}

impl DefectGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.nodes.len() + j]
    }

    /// The recorded shortest path between defects `i` and `j`, read from
    /// the tree of the smaller-indexed node so both orders agree.
    pub fn path(&self, i: usize, j: usize) -> Vec<EdgeId> {
        if i == j {
            return Vec::new();
        }
        let (root, leaf) = if i < j { (i, j) } else { (j, i) };
        let tree = &self.pred[root];
        let target = self.sources[root];
        let mut at = self.sources[leaf];
        let mut edges = Vec::new();
        while at != target {
            let edge_index = tree[at];
            assert!(edge_index != NO_PRED, "defect graph is disconnected");
            let e = EdgeId::from_index(edge_index as usize, self.size);
            edges.push(e);
            let [a, b] = plaquettes_of_edge(e, self.size);
            let (ai, bi) = (a.index(self.size), b.index(self.size));
            at = if ai == at { bi } else { ai };
        }
        edges
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (dist, node); weights are finite by construction.
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("weights are finite")
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from each defect representative over the fine plaquette graph.
/// Ties settle on the lexicographically smaller predecessor edge, so the
/// realised paths are reproducible.
pub fn defect_distances(
    syndrome: &Syndrome,
    partition: &SuperplaquettePartition,
    restored: &RestoredLattice,
    size: TorusSize,
) -> DefectGraph {
    assert!(syndrome.defects.len() % 2 == 0, "odd defect count");
    let n = syndrome.defects.len();
    let sources: Vec<usize> = syndrome
        .defects
        .iter()
        .map(|&r| partition.regions()[r as usize].rep.index(size))
        .collect();

    let plaquettes = size.plaquette_count();
    let mut dist_matrix = vec![0.0; n * n];
    let mut pred = Vec::with_capacity(n);

    let mut dist = vec![f64::INFINITY; plaquettes];
    let mut settled = vec![false; plaquettes];

    for (row, &source) in sources.iter().enumerate() {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        settled.iter_mut().for_each(|s| *s = false);
        let mut tree = vec![NO_PRED; plaquettes];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });

        while let Some(HeapEntry { node, .. }) = heap.pop() {
            if settled[node] {
                continue;
            }
            settled[node] = true;
            let p = crate::lattice::PlaquetteId::from_index(node, size);
            for e in edges_of_plaquette(p, size) {
                let ei = e.index(size);
                let w = restored.weight_at(ei);
                let [a, b] = plaquettes_of_edge(e, size);
                let nb = {
                    let (ai, bi) = (a.index(size), b.index(size));
                    if ai == node {
                        bi
                    } else {
                        ai
                    }
                };
                if settled[nb] {
                    continue;
                }
                let nd = dist[node] + w;
                if nd < dist[nb] {
                    dist[nb] = nd;
                    tree[nb] = ei as u32;
                    heap.push(HeapEntry { dist: nd, node: nb });
                } else if nd == dist[nb] && (ei as u32) < tree[nb] {
                    tree[nb] = ei as u32;
                }
            }
        }

        for (col, &target) in sources.iter().enumerate() {
            dist_matrix[row * n + col] = dist[target];
        }
        pred.push(tree);
    }

    DefectGraph {
        size,
        nodes: syndrome.defects.clone(),
        sources,
        dist: dist_matrix,
        pred,
    }
}

/// Pair up the defects with minimum total distance. Returns index pairs
/// into `graph.nodes`, each with the smaller index first.
pub fn min_weight_matching(graph: &DefectGraph) -> Vec<(usize, usize)> {
    let n = graph.node_count();
    assert!(n % 2 == 0, "perfect matching needs an even defect count");
    if n == 0 {
        return Vec::new();
    }
    // Distances are dyadic multiples of 2⁻²⁰, so the integer scaling below
    // is exact and the matcher sees the true weights.
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let scaled = graph.distance(i, j) * WEIGHT_SCALE;
            debug_assert!(scaled >= 0.0 && (scaled as i64) as f64 == scaled);
            edges.push((i, j, scaled as i64));
        }
    }
    let mate =
        matching::min_weight_perfect_matching(n, &edges).expect("complete even graph");
    (0..n)
        .filter(|&i| i < mate[i])
        .map(|i| (i, mate[i]))
        .collect()
}

/// The decoder's output: `E′` as a set of fine edges (zero-weight edges
/// included) together with its total matching weight.
#[derive(Clone, Debug)]
pub struct CorrectionChain {
    pub edges: EdgeSet,
    pub total_weight: f64,
}

impl CorrectionChain {
    pub fn empty(size: TorusSize) -> Self {
        CorrectionChain {
            edges: EdgeSet::empty(size),
            total_weight: 0.0,
        }
    }
}

/// Symmetric difference of the realised paths of all matched pairs.
pub fn correction_chain(matching: &[(usize, usize)], graph: &DefectGraph) -> CorrectionChain {
    let mut edges = EdgeSet::empty(graph.size);
    let mut total_weight = 0.0;
    for &(i, j) in matching {
        total_weight += graph.distance(i, j);
        for e in graph.path(i, j) {
            edges.toggle(e);
        }
    }
    CorrectionChain {
        edges,
        total_weight,
    }
}
