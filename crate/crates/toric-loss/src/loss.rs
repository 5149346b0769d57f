//! Superplaquette structure induced by qubit loss.
//!
//! Every lost edge merges its two adjacent plaquettes into one
//! superplaquette region. Pairs of neighbouring regions that still share
//! `n` surviving qubits are joined by a single superedge whose error
//! probability is the odd-parity probability of `n` independent flips,
//! `p = (1 − (1 − 2·p_com)^n) / 2`, and whose matching weight is
//! `J = ½·ln(1/p − 1)`. The restored lattice re-expands regions onto the
//! fine square lattice: region-internal edges (lost or surviving) carry
//! weight zero, cross-region edges carry their superedge's weight, so
//! pairwise distances between region representatives are unchanged.
//!
//! Weights are quantized to the `2⁻²⁰` grid at construction. Shortest-path
//! sums over quantized weights are exact in `f64` (they are small dyadic
//! rationals), which makes distance comparisons, the degraded/restored
//! equivalence and the integer scaling inside the matcher all exact.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{dual_step, plaquettes_of_edge, EdgeId, EdgeSet, PlaquetteId, TorusSize};
use crate::math;
use crate::noise::NoiseParams;

/// Weights live on the grid `k · 2⁻²⁰`.
pub const WEIGHT_SCALE_BITS: u32 = 20;
pub(crate) const WEIGHT_SCALE: f64 = (1u64 << WEIGHT_SCALE_BITS) as f64;

/// One superplaquette: a maximal set of plaquettes connected by lost edges.
#[derive(Clone, Debug)]
pub struct Region {
    /// Smallest-index member plaquette; stable under union order.
    pub rep: PlaquetteId,
    /// Members in ascending dense-index order.
    pub members: Vec<PlaquetteId>,
    /// True if the region closes a cycle with nonzero net x-displacement
    /// in the universal cover, i.e. winds the torus horizontally.
    pub wraps_x: bool,
    pub wraps_y: bool,
}

/// Partition of all plaquettes into superplaquette regions, together with
/// the lost-edge set that generated it.
#[derive(Clone, Debug)]
pub struct SuperplaquettePartition {
    size: TorusSize,
    region_of: Vec<u32>,
    regions: Vec<Region>,
    lost: EdgeSet,
}

impl SuperplaquettePartition {
    pub fn size(&self) -> TorusSize {
        self.size
    }

    /// The lost edges the partition was built from. Each region is
    /// spanned by its lost edges, which chain closures rely on.
    pub fn lost(&self) -> &EdgeSet {
        &self.lost
    }

    /// Index into [`Self::regions`] of the region containing `p`.
    pub fn region_of(&self, p: PlaquetteId) -> usize {
        self.region_of[p.index(self.size)] as usize
    }

    pub fn region_of_index(&self, plaquette_index: usize) -> usize {
        self.region_of[plaquette_index] as usize
    }

    /// Regions in ascending order of their representative's dense index.
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn any_region_wraps(&self) -> bool {
        self.regions.iter().any(|r| r.wraps_x || r.wraps_y)
    }
}

/// Union-find over plaquettes that tracks each node's displacement from
/// its parent in the universal cover. A union that closes a cycle with
/// nonzero net displacement marks the root as wrapping the torus.
struct DisplacedUnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    dx: Vec<i32>,
    dy: Vec<i32>,
    wrap_x: Vec<bool>,
    wrap_y: Vec<bool>,
    path: Vec<u32>,
}

impl DisplacedUnionFind {
    fn new(n: usize) -> Self {
        DisplacedUnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            dx: vec![0; n],
            dy: vec![0; n],
            wrap_x: vec![false; n],
            wrap_y: vec![false; n],
            path: Vec::new(),
        }
    }

    /// Root of `v` plus the displacement of `v` relative to that root.
    fn find(&mut self, v: usize) -> (usize, i32, i32) {
        self.path.clear();
        let mut cur = v;
        let mut ox = 0i32;
        let mut oy = 0i32;
        while self.parent[cur] as usize != cur {
            self.path.push(cur as u32);
            ox += self.dx[cur];
            oy += self.dy[cur];
            cur = self.parent[cur] as usize;
        }
        // Path compression: point everything on the path at the root and
        // store cumulative displacements.
        let mut rem_x = ox;
        let mut rem_y = oy;
        for i in 0..self.path.len() {
            let node = self.path[i] as usize;
            let step_x = self.dx[node];
            let step_y = self.dy[node];
            self.parent[node] = cur as u32;
            self.dx[node] = rem_x;
            self.dy[node] = rem_y;
            rem_x -= step_x;
            rem_y -= step_y;
        }
        (cur, ox, oy)
    }

    /// Record the relation `pos(q) = pos(p) + step`.
    fn union(&mut self, p: usize, q: usize, step: (i32, i32)) {
        let (rp, px, py) = self.find(p);
        let (rq, qx, qy) = self.find(q);
        if rp == rq {
            // Cycle closed; any displacement mismatch is a multiple of L
            // along each wrapped axis.
            let diff_x = px + step.0 - qx;
            let diff_y = py + step.1 - qy;
            if diff_x != 0 {
                self.wrap_x[rp] = true;
            }
            if diff_y != 0 {
                self.wrap_y[rp] = true;
            }
            return;
        }
        // pos(q) = pos(p) + step  =>  offsets relative to the new root.
        let (big, small, small_off_x, small_off_y) = if self.size[rp] >= self.size[rq] {
            (rp, rq, px + step.0 - qx, py + step.1 - qy)
        } else {
            (rq, rp, qx - step.0 - px, qy - step.1 - py)
        };
        self.parent[small] = big as u32;
        self.dx[small] = small_off_x;
        self.dy[small] = small_off_y;
        self.size[big] += self.size[small];
        self.wrap_x[big] |= self.wrap_x[small];
        self.wrap_y[big] |= self.wrap_y[small];
    }
}

/// Merge the two plaquettes adjacent to each lost edge.
pub fn build_partition(lost: &EdgeSet, size: TorusSize) -> SuperplaquettePartition {
    let n = size.plaquette_count();
    let mut uf = DisplacedUnionFind::new(n);
    for index in lost.iter_indices() {
        let e = EdgeId::from_index(index, size);
        let [p, q] = plaquettes_of_edge(e, size);
        uf.union(p.index(size), q.index(size), dual_step(e));
    }

    // Number regions by first occurrence in plaquette scan order, so the
    // representative is the smallest member index whatever the union order.
    let mut region_of = vec![u32::MAX; n];
    let mut root_region = vec![u32::MAX; n];
    let mut regions: Vec<Region> = Vec::new();
    for pi in 0..n {
        let (root, _, _) = uf.find(pi);
        let ridx = if root_region[root] == u32::MAX {
            let ridx = regions.len() as u32;
            root_region[root] = ridx;
            regions.push(Region {
                rep: PlaquetteId::from_index(pi, size),
                members: Vec::new(),
                wraps_x: uf.wrap_x[root],
                wraps_y: uf.wrap_y[root],
            });
            ridx
        } else {
            root_region[root]
        };
        region_of[pi] = ridx;
        regions[ridx as usize]
            .members
            .push(PlaquetteId::from_index(pi, size));
    }

    SuperplaquettePartition {
        size,
        region_of,
        regions,
        lost: lost.clone(),
    }
}

/// True when no region winds the torus, i.e. deformed logical operators
/// survive and loss recovery is possible.
pub fn loss_recoverable(partition: &SuperplaquettePartition) -> bool {
    !partition.any_region_wraps()
}

/// Probability of an odd number of flips among `n_shared` qubits flipping
/// independently at rate `p_com`: `(1 − (1 − 2·p_com)^n) / 2`.
pub fn parity_probability(n_shared: u32, p_com: f64) -> f64 {
    debug_assert!(n_shared >= 1);
    debug_assert!((0.0..0.5).contains(&p_com));
    (1.0 - math::powi(1.0 - 2.0 * p_com, n_shared)) / 2.0
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum WeightError {
    /// The weight would be infinite; the matching decoder requires
    /// `p_com > 0` (pure loss is handled by the percolation check).
    NonPositiveProbability(f64),
    /// Beyond 0.5 the weight goes negative.
    AboveHalf(f64),
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::NonPositiveProbability(p) => {
                write!(f, "edge error probability must be positive, got {p}")
            }
            WeightError::AboveHalf(p) => {
                write!(f, "edge error probability must not exceed 0.5, got {p}")
            }
        }
    }
}

impl core::error::Error for WeightError {}

/// Matching weight of an edge with error probability `p`:
/// `J = ½·ln(1/p − 1)`, zero at `p = 0.5` and strictly decreasing.
pub fn edge_weight(p_edge: f64) -> Result<f64, WeightError> {
    if p_edge <= 0.0 {
        return Err(WeightError::NonPositiveProbability(p_edge));
    }
    if p_edge > 0.5 {
        return Err(WeightError::AboveHalf(p_edge));
    }
    Ok(0.5 * math::ln(1.0 / p_edge - 1.0))
}

pub(crate) fn quantize_weight(w: f64) -> f64 {
    math::round(w * WEIGHT_SCALE) / WEIGHT_SCALE
}

/// A bundle of surviving edges joining two distinct regions, collapsed to
/// a single edge of the degraded lattice.
#[derive(Clone, Debug)]
pub struct Superedge {
    /// Indices of the two regions, ascending.
    pub regions: (u32, u32),
    /// Representatives of the two regions.
    pub endpoints: (PlaquetteId, PlaquetteId),
    /// Number of surviving physical qubits shared by the two regions.
    pub n_shared: u32,
    /// The shared edges, in dense index order.
    pub member_edges: Vec<EdgeId>,
    /// Odd-parity error probability of the bundle.
    pub error_probability: f64,
    /// Quantized matching weight.
    pub weight: f64,
}

/// Collapse surviving cross-region edges into superedges. Surviving edges
/// internal to one region belong to no superedge (an error there never
/// changes any measurable syndrome). Requires `p_com > 0`.
pub fn build_degraded_graph(
    partition: &SuperplaquettePartition,
    lost: &EdgeSet,
    params: NoiseParams,
    size: TorusSize,
) -> Result<Vec<Superedge>, WeightError> {
    let mut bundles: BTreeMap<(u32, u32), Vec<EdgeId>> = BTreeMap::new();
    for index in 0..size.edge_count() {
        if lost.contains_index(index) {
            continue;
        }
        let e = EdgeId::from_index(index, size);
        let [p, q] = plaquettes_of_edge(e, size);
        let rp = partition.region_of(p) as u32;
        let rq = partition.region_of(q) as u32;
        if rp == rq {
            continue;
        }
        let key = (rp.min(rq), rp.max(rq));
        bundles.entry(key).or_default().push(e);
    }

    // J depends only on n_shared; memoize the few distinct values.
    let mut weight_of_n: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let mut superedges = Vec::with_capacity(bundles.len());
    for ((ra, rb), member_edges) in bundles {
        let n_shared = member_edges.len() as u32;
        let (p_err, weight) = match weight_of_n.get(&n_shared) {
            Some(&cached) => cached,
            None => {
                let p_err = parity_probability(n_shared, params.p_com());
                let weight = quantize_weight(edge_weight(p_err)?);
                weight_of_n.insert(n_shared, (p_err, weight));
                (p_err, weight)
            }
        };
        superedges.push(Superedge {
            regions: (ra, rb),
            endpoints: (
                partition.regions()[ra as usize].rep,
                partition.regions()[rb as usize].rep,
            ),
            n_shared,
            member_edges,
            error_probability: p_err,
            weight,
        });
    }
    Ok(superedges)
}

/// Per-fine-edge weights: zero on region-internal edges (lost or
/// surviving), the superedge weight on cross-region edges.
#[derive(Clone, Debug)]
pub struct RestoredLattice {
    size: TorusSize,
    weights: Vec<f64>,
}

impl RestoredLattice {
    pub fn size(&self) -> TorusSize {
        self.size
    }

    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights[e.index(self.size)]
    }

    pub fn weight_at(&self, index: usize) -> f64 {
        self.weights[index]
    }
}

pub fn build_restored_lattice(
    _partition: &SuperplaquettePartition,
    superedges: &[Superedge],
    size: TorusSize,
) -> RestoredLattice {
    let mut weights = vec![0.0; size.edge_count()];
    for se in superedges {
        for &e in &se.member_edges {
            weights[e.index(size)] = se.weight;
        }
    }
    RestoredLattice { size, weights }
}
