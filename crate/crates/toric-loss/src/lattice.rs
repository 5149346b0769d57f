//! Geometry of the `L × L` toric code lattice.
//!
//! Vertices sit at integer coordinates `(x, y)` with both coordinates taken
//! mod `L`. A `Horizontal` edge `(x, y)` spans vertices `(x, y) → (x+1, y)`;
//! a `Vertical` edge `(x, y)` spans `(x, y) → (x, y+1)`. Plaquette `(x, y)`
//! is the unit square with lower-left corner `(x, y)`, star `(x, y)` is the
//! vertex `(x, y)`.
//!
//! Fixed indexing convention (everything else in the crate inherits it):
//!
//! * horizontal edge `(x, y)` separates plaquettes `(x, y)` and `(x, y−1)`;
//! * vertical edge `(x, y)` separates plaquettes `(x, y)` and `(x−1, y)`;
//! * dense edge index = `orientation · L² + y · L + x` with `Horizontal = 0`.
//!
//! There are `2L²` edges (qubits), `L²` plaquettes and `L²` stars.

use alloc::vec;
use alloc::vec::Vec;

/// Linear dimension of the periodic lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TorusSize {
    l: u32,
}

impl TorusSize {
    /// Panics if `l < 2` (a one-cell torus has coincident faces).
    pub fn new(l: u32) -> Self {
        assert!(l >= 2, "lattice size must be at least 2, got {l}");
        TorusSize { l }
    }

    pub fn l(self) -> u32 {
        self.l
    }

    pub fn edge_count(self) -> usize {
        2 * self.plaquette_count()
    }

    pub fn plaquette_count(self) -> usize {
        self.l as usize * self.l as usize
    }

    pub fn star_count(self) -> usize {
        self.plaquette_count()
    }

    fn wrap(self, c: i64) -> u32 {
        c.rem_euclid(self.l as i64) as u32
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn as_index(self) -> usize {
        match self {
            Orientation::Horizontal => 0,
            Orientation::Vertical => 1,
        }
    }
}

/// A lattice edge, i.e. one physical qubit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId {
    pub x: u32,
    pub y: u32,
    pub orientation: Orientation,
}

impl EdgeId {
    pub fn new(x: u32, y: u32, orientation: Orientation, size: TorusSize) -> Self {
        debug_assert!(x < size.l() && y < size.l());
        EdgeId { x, y, orientation }
    }

    /// Construct from possibly out-of-range coordinates, reducing mod `L`.
    pub fn wrapped(x: i64, y: i64, orientation: Orientation, size: TorusSize) -> Self {
        EdgeId {
            x: size.wrap(x),
            y: size.wrap(y),
            orientation,
        }
    }

    /// Dense index `orientation · L² + y · L + x`.
    pub fn index(self, size: TorusSize) -> usize {
        let l = size.l() as usize;
        self.orientation.as_index() * l * l + self.y as usize * l + self.x as usize
    }

    pub fn from_index(index: usize, size: TorusSize) -> Self {
        let l = size.l() as usize;
        debug_assert!(index < size.edge_count());
        let orientation = if index < l * l {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        };
        let rem = index % (l * l);
        EdgeId {
            x: (rem % l) as u32,
            y: (rem / l) as u32,
            orientation,
        }
    }
}

/// A face of the lattice; site of a Z-type stabiliser.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PlaquetteId {
    pub x: u32,
    pub y: u32,
}

impl PlaquetteId {
    pub fn new(x: u32, y: u32, size: TorusSize) -> Self {
        debug_assert!(x < size.l() && y < size.l());
        PlaquetteId { x, y }
    }

    pub fn wrapped(x: i64, y: i64, size: TorusSize) -> Self {
        PlaquetteId {
            x: size.wrap(x),
            y: size.wrap(y),
        }
    }

    /// Dense index `y · L + x`.
    pub fn index(self, size: TorusSize) -> usize {
        self.y as usize * size.l() as usize + self.x as usize
    }

    pub fn from_index(index: usize, size: TorusSize) -> Self {
        let l = size.l() as usize;
        debug_assert!(index < size.plaquette_count());
        PlaquetteId {
            x: (index % l) as u32,
            y: (index / l) as u32,
        }
    }
}

/// A vertex of the lattice; site of an X-type stabiliser.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StarId {
    pub x: u32,
    pub y: u32,
}

impl StarId {
    pub fn new(x: u32, y: u32, size: TorusSize) -> Self {
        debug_assert!(x < size.l() && y < size.l());
        StarId { x, y }
    }

    pub fn index(self, size: TorusSize) -> usize {
        self.y as usize * size.l() as usize + self.x as usize
    }

    pub fn from_index(index: usize, size: TorusSize) -> Self {
        let l = size.l() as usize;
        StarId {
            x: (index % l) as u32,
            y: (index / l) as u32,
        }
    }
}

/// The four edges bounding face `p`: bottom, top, left, right.
pub fn edges_of_plaquette(p: PlaquetteId, size: TorusSize) -> [EdgeId; 4] {
    let (x, y) = (p.x as i64, p.y as i64);
    [
        EdgeId::wrapped(x, y, Orientation::Horizontal, size),
        EdgeId::wrapped(x, y + 1, Orientation::Horizontal, size),
        EdgeId::wrapped(x, y, Orientation::Vertical, size),
        EdgeId::wrapped(x + 1, y, Orientation::Vertical, size),
    ]
}

/// The two faces separated by edge `e`. The first is `(e.x, e.y)`, the
/// second its neighbour one dual step away (`(0,−1)` for horizontal edges,
/// `(−1,0)` for vertical ones).
pub fn plaquettes_of_edge(e: EdgeId, size: TorusSize) -> [PlaquetteId; 2] {
    let (x, y) = (e.x as i64, e.y as i64);
    match e.orientation {
        Orientation::Horizontal => [
            PlaquetteId::wrapped(x, y, size),
            PlaquetteId::wrapped(x, y - 1, size),
        ],
        Orientation::Vertical => [
            PlaquetteId::wrapped(x, y, size),
            PlaquetteId::wrapped(x - 1, y, size),
        ],
    }
}

/// Displacement from the first to the second plaquette of an edge, as a
/// single unreduced lattice step. Used for winding detection in the
/// universal cover.
pub fn dual_step(e: EdgeId) -> (i32, i32) {
    match e.orientation {
        Orientation::Horizontal => (0, -1),
        Orientation::Vertical => (-1, 0),
    }
}

/// The four edges incident on vertex `s`: east, west, north, south.
pub fn edges_of_star(s: StarId, size: TorusSize) -> [EdgeId; 4] {
    let (x, y) = (s.x as i64, s.y as i64);
    [
        EdgeId::wrapped(x, y, Orientation::Horizontal, size),
        EdgeId::wrapped(x - 1, y, Orientation::Horizontal, size),
        EdgeId::wrapped(x, y, Orientation::Vertical, size),
        EdgeId::wrapped(x, y - 1, Orientation::Vertical, size),
    ]
}

/// The two vertices joined by edge `e`.
pub fn stars_of_edge(e: EdgeId, size: TorusSize) -> [StarId; 2] {
    let (x, y) = (e.x as i64, e.y as i64);
    let second = match e.orientation {
        Orientation::Horizontal => (x + 1, y),
        Orientation::Vertical => (x, y + 1),
    };
    [
        StarId::new(e.x, e.y, size),
        StarId::new(size.wrap(second.0), size.wrap(second.1), size),
    ]
}

/// A set of edges stored as a dense bit map; the workhorse for error
/// chains, loss configurations and correction chains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeSet {
    size: TorusSize,
    bits: Vec<bool>,
}

impl EdgeSet {
    pub fn empty(size: TorusSize) -> Self {
        EdgeSet {
            size,
            bits: vec![false; size.edge_count()],
        }
    }

    pub fn from_edges(edges: &[EdgeId], size: TorusSize) -> Self {
        let mut set = EdgeSet::empty(size);
        for &e in edges {
            set.insert(e);
        }
        set
    }

    pub fn size(&self) -> TorusSize {
        self.size
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits[e.index(self.size)]
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.bits[e.index(self.size)] = true;
    }

    pub fn toggle(&mut self, e: EdgeId) {
        let i = e.index(self.size);
        self.bits[i] = !self.bits[i];
    }

    pub fn toggle_index(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Member edges in dense index order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let size = self.size;
        self.iter_indices()
            .map(move |i| EdgeId::from_index(i, size))
    }

    /// Dense indices of member edges, ascending.
    pub fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.size, other.size);
        EdgeSet {
            size: self.size,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    pub fn intersects(&self, other: &EdgeSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(&a, &b)| a && b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let size = TorusSize::new(4);
        assert_eq!(size.edge_count(), 32);
        assert_eq!(size.plaquette_count(), 16);
        assert_eq!(size.star_count(), 16);
    }

    #[test]
    #[should_panic]
    fn rejects_degenerate_size() {
        TorusSize::new(1);
    }

    #[test]
    fn edge_index_round_trip() {
        let size = TorusSize::new(5);
        for i in 0..size.edge_count() {
            assert_eq!(EdgeId::from_index(i, size).index(size), i);
        }
    }

    #[test]
    fn plaquette_edges_are_distinct_and_adjacent() {
        let size = TorusSize::new(4);
        let p = PlaquetteId::new(0, 0, size);
        let edges = edges_of_plaquette(p, size);
        for (i, &a) in edges.iter().enumerate() {
            assert!(plaquettes_of_edge(a, size).contains(&p));
            for &b in &edges[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn every_edge_in_two_plaquettes_l2() {
        // On L=2 the wrap is maximal; faces must still be distinct.
        let size = TorusSize::new(2);
        let mut hits = vec![0u32; size.edge_count()];
        for pi in 0..size.plaquette_count() {
            let p = PlaquetteId::from_index(pi, size);
            for e in edges_of_plaquette(p, size) {
                hits[e.index(size)] += 1;
            }
        }
        assert!(hits.iter().all(|&h| h == 2));
        for ei in 0..size.edge_count() {
            let [a, b] = plaquettes_of_edge(EdgeId::from_index(ei, size), size);
            assert_ne!(a, b);
        }
    }

    #[test]
    fn plaquette_cover_l4() {
        // Union over all 16 plaquettes covers all 32 edges exactly twice,
        // so the product of all plaquette operators is the identity.
        let size = TorusSize::new(4);
        let mut hits = vec![0u32; size.edge_count()];
        for pi in 0..size.plaquette_count() {
            for e in edges_of_plaquette(PlaquetteId::from_index(pi, size), size) {
                hits[e.index(size)] += 1;
            }
        }
        assert!(hits.iter().all(|&h| h == 2));
    }

    #[test]
    fn horizontal_edge_separates_vertical_neighbours() {
        let size = TorusSize::new(4);
        let e = EdgeId::new(1, 1, Orientation::Horizontal, size);
        let [a, b] = plaquettes_of_edge(e, size);
        assert_eq!(a, PlaquetteId::new(1, 1, size));
        assert_eq!(b, PlaquetteId::new(1, 0, size));
    }

    #[test]
    fn adjacency_round_trip_l3() {
        let size = TorusSize::new(3);
        for ei in 0..size.edge_count() {
            let e = EdgeId::from_index(ei, size);
            for p in plaquettes_of_edge(e, size) {
                assert!(edges_of_plaquette(p, size).contains(&e));
            }
        }
        for pi in 0..size.plaquette_count() {
            let p = PlaquetteId::from_index(pi, size);
            for e in edges_of_plaquette(p, size) {
                assert!(plaquettes_of_edge(e, size).contains(&p));
            }
        }
    }

    #[test]
    fn every_edge_in_two_stars_l3() {
        let size = TorusSize::new(3);
        let mut hits = vec![0u32; size.edge_count()];
        for si in 0..size.star_count() {
            let s = StarId::from_index(si, size);
            let edges = edges_of_star(s, size);
            for (i, &a) in edges.iter().enumerate() {
                assert!(stars_of_edge(a, size).contains(&s));
                for &b in &edges[i + 1..] {
                    assert_ne!(a, b);
                }
            }
            for e in edges {
                hits[e.index(size)] += 1;
            }
        }
        assert!(hits.iter().all(|&h| h == 2));
    }

    #[test]
    fn stars_and_plaquettes_share_zero_or_two_edges() {
        // The stabiliser commutation condition, checked exhaustively.
        let size = TorusSize::new(4);
        for si in 0..size.star_count() {
            let star_edges = edges_of_star(StarId::from_index(si, size), size);
            for pi in 0..size.plaquette_count() {
                let plaq_edges = edges_of_plaquette(PlaquetteId::from_index(pi, size), size);
                let shared = star_edges
                    .iter()
                    .filter(|e| plaq_edges.contains(e))
                    .count();
                assert!(shared == 0 || shared == 2, "shared {shared} edges");
            }
        }
    }

    #[test]
    fn translation_preserves_adjacency() {
        let size = TorusSize::new(4);
        let l = size.l() as i64;
        for &(dx, dy) in &[(1i64, 0i64), (0, 1)] {
            for pi in 0..size.plaquette_count() {
                let p = PlaquetteId::from_index(pi, size);
                let q = PlaquetteId::wrapped(p.x as i64 + dx, p.y as i64 + dy, size);
                let shifted: Vec<EdgeId> = edges_of_plaquette(p, size)
                    .iter()
                    .map(|e| {
                        EdgeId::wrapped(
                            (e.x as i64 + dx).rem_euclid(l),
                            (e.y as i64 + dy).rem_euclid(l),
                            e.orientation,
                            size,
                        )
                    })
                    .collect();
                let mut expected = edges_of_plaquette(q, size).to_vec();
                let mut got = shifted;
                expected.sort();
                got.sort();
                assert_eq!(expected, got);
            }
        }
    }

    #[test]
    fn edge_set_basics() {
        let size = TorusSize::new(3);
        let mut s = EdgeSet::empty(size);
        assert!(s.is_empty());
        let e = EdgeId::new(2, 1, Orientation::Vertical, size);
        s.insert(e);
        assert!(s.contains(e));
        assert_eq!(s.count(), 1);
        s.toggle(e);
        assert!(s.is_empty());
    }
}
