//! Exact maximum-weight matching in general graphs (Edmonds' blossom
//! algorithm, primal-dual O(n³) formulation), plus a minimum-weight
//! perfect-matching wrapper.
//!
//! The implementation follows the classic formulation of Galil,
//! "Efficient algorithms for finding maximum matching in graphs" (1986),
//! in the arrangement popularised by Joris van Rantwijk's reference
//! implementation: vertices `0..n` are trivial blossoms, non-trivial
//! blossoms take numbers `n..2n`, edge endpoints `2k` / `2k+1` belong to
//! edge `k`, and vertex duals are stored doubled so that all arithmetic
//! stays in integers. Terms like S-/T-blossom come from that literature.
//!
//! Weights are `i64`; with integer weights the result is exactly optimal
//! and a dual-certificate check runs after every solve. All scans are in
//! fixed index order, so ties resolve deterministically.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Weight = i64;

pub(crate) const UNMATCHED: usize = usize::MAX;
const NONE: usize = usize::MAX;

const LABEL_FREE: u8 = 0;
const LABEL_S: u8 = 1;
const LABEL_T: u8 = 2;
const LABEL_CRUMB: u8 = 5;

/// Minimum-weight perfect matching. Returns `mate` with `mate[v]` the
/// partner of `v`, or `None` if no perfect matching exists.
pub(crate) fn min_weight_perfect_matching(
    num_vertices: usize,
    edges: &[(usize, usize, Weight)],
) -> Option<Vec<usize>> {
    if num_vertices == 0 {
        return Some(Vec::new());
    }
    if num_vertices % 2 != 0 {
        return None;
    }
    // Maximise total (wmax − w) over maximum-cardinality matchings; on a
    // graph admitting a perfect matching this minimises total w.
    let wmax = edges.iter().map(|&(_, _, w)| w).max()?;
    let flipped: Vec<(usize, usize, Weight)> = edges
        .iter()
        .map(|&(i, j, w)| (i, j, wmax - w))
        .collect();
    let mate = max_weight_matching(num_vertices, &flipped, true);
    if mate.iter().any(|&m| m == UNMATCHED) {
        return None;
    }
    Some(mate)
}

/// Maximum-weight matching; with `max_cardinality` the matching is
/// required to have maximum cardinality and is only max-weight among
/// those. Returns `mate[v] = partner` or `UNMATCHED`.
pub(crate) fn max_weight_matching(
    num_vertices: usize,
    edges: &[(usize, usize, Weight)],
    max_cardinality: bool,
) -> Vec<usize> {
    if edges.is_empty() {
        return vec![UNMATCHED; num_vertices];
    }
    let mut m = Matcher::new(num_vertices, edges, max_cardinality);
    m.solve();
    m.verify_optimum();
    m.mate_vertices()
}

struct Matcher<'a> {
    nvertex: usize,
    nedge: usize,
    edges: &'a [(usize, usize, Weight)],
    max_cardinality: bool,
    /// endpoint[p] = vertex at endpoint p; endpoints 2k, 2k+1 belong to edge k.
    endpoint: Vec<usize>,
    /// neighbend[v] = remote endpoints of edges incident on v.
    neighbend: Vec<Vec<usize>>,
    /// mate[v] = remote endpoint of v's matched edge, or NONE.
    mate: Vec<usize>,
    /// label per (sub-)blossom: free / S / T (+ breadcrumb during scans).
    label: Vec<u8>,
    /// Remote endpoint through which the label was assigned.
    labelend: Vec<usize>,
    /// Top-level blossom containing each vertex.
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    /// blossomendps[b][i] = endpoint of childs[i] on the edge to childs[i+1].
    blossomendps: Vec<Vec<usize>>,
    /// Least-slack edge bookkeeping for the dual updates.
    bestedge: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    /// dualvar[v] = 2·u(v) for vertices, z(b) for blossoms.
    dualvar: Vec<Weight>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(num_vertices: usize, edges: &'a [(usize, usize, Weight)], max_cardinality: bool) -> Self {
        let nvertex = num_vertices;
        let nedge = edges.len();
        for &(i, j, _) in edges {
            assert!(i != j && i < nvertex && j < nvertex, "bad edge ({i},{j})");
        }
        let maxweight = edges.iter().map(|&(_, _, w)| w).max().unwrap().max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut blossombase: Vec<usize> = (0..nvertex).collect();
        blossombase.extend(core::iter::repeat(NONE).take(nvertex));
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(core::iter::repeat(0).take(nvertex));
        Matcher {
            nvertex,
            nedge,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![LABEL_FREE; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![Vec::new(); 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    /// 2 × slack of edge k (not meaningful inside blossoms).
    fn slack(&self, k: usize) -> Weight {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut leaves = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                leaves.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().copied());
            }
        }
        leaves
    }

    /// Label the top-level blossom of `w` and, for T labels, propagate S to
    /// its mate.
    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == LABEL_S {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == LABEL_T {
            let base = self.blossombase[b];
            assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, LABEL_S, mbase ^ 1);
        }
    }

    /// Trace back from both ends of an S-S edge; returns the base of a new
    /// blossom, or NONE if an augmenting path was found instead.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            assert_eq!(self.label[b], LABEL_S);
            path.push(b);
            self.label[b] = LABEL_CRUMB;
            assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                assert_eq!(self.label[b], LABEL_T);
                assert!(self.labelend[b] != NONE);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                core::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Fold the alternating cycle through edge k and `base` into a new
    /// S-blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];

        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        let mut childs: Vec<usize> = Vec::new();
        let mut endps: Vec<usize> = Vec::new();

        while bv != bb {
            self.blossomparent[bv] = b;
            childs.push(bv);
            endps.push(self.labelend[bv]);
            assert!(
                self.label[bv] == LABEL_T
                    || (self.label[bv] == LABEL_S
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);

        while bw != bb {
            self.blossomparent[bw] = b;
            childs.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            assert!(
                self.label[bw] == LABEL_T
                    || (self.label[bw] == LABEL_S
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }

        self.blossomchilds[b] = childs;
        self.blossomendps[b] = endps;

        assert_eq!(self.label[bb], LABEL_S);
        self.label[b] = LABEL_S;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;

        for v in self.blossom_leaves(b) {
            if self.label[self.inblossom[v]] == LABEL_T {
                // Former T-vertex becomes S through the new blossom.
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }

        // Merge least-slack edge lists of the children.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for ci in 0..self.blossomchilds[b].len() {
            let bv = self.blossomchilds[b][ci];
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                self.blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossombestedges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        core::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = Vec::new();
            self.bestedge[bv] = NONE;
        }
        self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for idx in 0..self.blossombestedges[b].len() {
            let k = self.blossombestedges[b][idx];
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
    }

    /// Expand a blossom whose dual has reached zero (or at stage end).
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for idx in 0..self.blossomchilds[b].len() {
            let s = self.blossomchilds[b][idx];
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }

        // Expanding a T-blossom mid-stage: relabel the even-path children
        // between entry and base, leave the rest for rediscovery.
        if !endstage && self.label[b] == LABEL_T {
            assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&c| c == entrychild)
                .unwrap() as i64;
            let len = self.blossomchilds[b].len() as i64;
            let (jstep, endptrick): (i64, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };

            let mut p = self.labelend[b];
            while j != 0 {
                let ep = self.endpoint[p ^ 1];
                self.label[ep] = LABEL_FREE;
                let endp = self.endp_at(b, j - endptrick as i64);
                self.label[self.endpoint[endp ^ endptrick ^ 1]] = LABEL_FREE;
                self.assign_label(ep, LABEL_T, p);

                self.allowedge[endp / 2] = true;
                j += jstep;
                p = self.endp_at(b, j - endptrick as i64) ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }

            // Base child keeps label T without stepping to its mate.
            let bv = self.child_at(b, j);
            let ep = self.endpoint[p ^ 1];
            self.label[ep] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.labelend[ep] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;

            j += jstep;
            while self.child_at(b, j) != entrychild {
                let bv = self.child_at(b, j);
                if self.label[bv] == LABEL_S {
                    j += jstep;
                    continue;
                }
                let mut v = NONE;
                for leaf in self.blossom_leaves(bv) {
                    v = leaf;
                    if self.label[v] != LABEL_FREE {
                        break;
                    }
                }
                if v != NONE && self.label[v] != LABEL_FREE {
                    assert_eq!(self.label[v], LABEL_T);
                    assert_eq!(self.inblossom[v], bv);
                    self.label[v] = LABEL_FREE;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = LABEL_FREE;
                    let lblend = self.labelend[v];
                    self.assign_label(v, LABEL_T, lblend);
                }
                j += jstep;
            }
        }

        self.label[b] = LABEL_FREE;
        self.labelend[b] = NONE;
        self.blossombase[b] = NONE;
        self.bestedge[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombestedges[b] = Vec::new();
        self.unusedblossoms.push(b);
    }

    /// Python-style signed indexing into blossomchilds[b].
    fn child_at(&self, b: usize, j: i64) -> usize {
        let v = &self.blossomchilds[b];
        let idx = if j >= 0 {
            j as usize
        } else {
            v.len() - (-j) as usize
        };
        v[idx]
    }

    fn endp_at(&self, b: usize, j: i64) -> usize {
        let v = &self.blossomendps[b];
        let idx = if j >= 0 {
            j as usize
        } else {
            v.len() - (-j) as usize
        };
        v[idx]
    }

    /// Swap matched/unmatched edges along the alternating path inside
    /// blossom b from vertex v to the base; afterwards v is the base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }

        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as i64;
        let len = self.blossomchilds[b].len() as i64;
        let (jstep, endptrick): (i64, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };

        while j != 0 {
            j += jstep;
            let t = self.child_at(b, j);
            let p = self.endp_at(b, j - endptrick as i64) ^ endptrick;
            if t >= self.nvertex {
                let ep = self.endpoint[p];
                self.augment_blossom(t, ep);
            }
            j += jstep;
            let t = self.child_at(b, j);
            if t >= self.nvertex {
                let ep = self.endpoint[p ^ 1];
                self.augment_blossom(t, ep);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }

        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v);
    }

    /// Augment the matching along the path through S-S edge k.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for &(start, startp) in &[(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = start;
            let mut p = startp;
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], LABEL_S);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;

                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], LABEL_T);
                assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _stage in 0..self.nvertex {
            self.label.iter_mut().for_each(|l| *l = LABEL_FREE);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in self.nvertex..2 * self.nvertex {
                self.blossombestedges[b] = Vec::new();
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();

            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, NONE);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    assert_eq!(self.label[self.inblossom[v]], LABEL_S);
                    let degree = self.neighbend[v].len();
                    let mut done = false;
                    for ni in 0..degree {
                        let p = self.neighbend[v][ni];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, p ^ 1);
                            } else if self.label[self.inblossom[w]] == LABEL_S {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    done = true;
                                    break;
                                }
                            } else if self.label[w] == LABEL_FREE {
                                assert_eq!(self.label[self.inblossom[w]], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == LABEL_S {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == LABEL_FREE
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                    if done {
                        break;
                    }
                }

                if augmented {
                    break;
                }

                // Dual update: find the binding constraint.
                let mut deltatype = 0u8;
                let mut delta: Weight = 0;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;

                if !self.max_cardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..self.nvertex].iter().min().unwrap();
                }

                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == LABEL_FREE && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }

                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == LABEL_S
                        && self.bestedge[b] != NONE
                    {
                        let d = self.slack(self.bestedge[b]) / 2;
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }

                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == LABEL_T
                        && (deltatype == 0 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                if deltatype == 0 {
                    // Max-cardinality optimum reached; final clamp so the
                    // certificate below verifies.
                    assert!(self.max_cardinality);
                    deltatype = 1;
                    delta = (*self.dualvar[..self.nvertex].iter().min().unwrap()).max(0);
                }

                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        LABEL_FREE => {}
                        LABEL_S => self.dualvar[v] -= delta,
                        LABEL_T => self.dualvar[v] += delta,
                        other => panic!("unexpected label {other}"),
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            LABEL_FREE => {}
                            LABEL_S => self.dualvar[b] += delta,
                            LABEL_T => self.dualvar[b] -= delta,
                            other => panic!("unexpected label {other}"),
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == LABEL_FREE {
                            i = j;
                        }
                        assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    other => panic!("unexpected delta type {other}"),
                }
            }

            if !augmented {
                break;
            }

            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == LABEL_S
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Check the complementary-slackness certificate of the final duals.
    fn verify_optimum(&self) {
        let vdualoffset = if self.max_cardinality {
            (-*self.dualvar[..self.nvertex].iter().min().unwrap()).max(0)
        } else {
            0
        };
        assert!(*self.dualvar[..self.nvertex].iter().min().unwrap() + vdualoffset >= 0);
        assert!(*self.dualvar[self.nvertex..].iter().min().unwrap() >= 0);

        for k in 0..self.nedge {
            let (i, j, wt) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[bi];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert!(s == 0, "matched edge {k} has nonzero slack");
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] != NONE || self.dualvar[v] + vdualoffset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE && self.dualvar[b] > 0 {
                assert!(self.blossomendps[b].len() % 2 == 1);
                for (ix, &p) in self.blossomendps[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }

    /// mate[] as partner vertices.
    fn mate_vertices(&self) -> Vec<usize> {
        let mate: Vec<usize> = self
            .mate
            .iter()
            .map(|&m| if m == NONE { UNMATCHED } else { self.endpoint[m] })
            .collect();
        for (v, &m) in mate.iter().enumerate() {
            assert!(m == UNMATCHED || mate[m] == v);
        }
        mate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mwm(edges: &[(usize, usize, Weight)]) -> Vec<usize> {
        let n = edges
            .iter()
            .map(|&(i, j, _)| i.max(j) + 1)
            .max()
            .unwrap_or(0);
        max_weight_matching(n, edges, false)
    }

    fn mwm_card(edges: &[(usize, usize, Weight)]) -> Vec<usize> {
        let n = edges
            .iter()
            .map(|&(i, j, _)| i.max(j) + 1)
            .max()
            .unwrap_or(0);
        max_weight_matching(n, edges, true)
    }

    const U: usize = UNMATCHED;

    #[test]
    fn trivial_cases() {
        assert_eq!(max_weight_matching(0, &[], false), Vec::<usize>::new());
        assert_eq!(mwm(&[(0, 1, 1)]), vec![1, 0]);
        assert_eq!(mwm(&[(1, 2, 10), (2, 3, 11)]), vec![U, U, 3, 2]);
        assert_eq!(
            mwm(&[(1, 2, 5), (2, 3, 11), (3, 4, 5)]),
            vec![U, U, 3, 2, U]
        );
        assert_eq!(
            mwm_card(&[(1, 2, 5), (2, 3, 11), (3, 4, 5)]),
            vec![U, 2, 1, 4, 3]
        );
    }

    #[test]
    fn negative_weights() {
        let e = [(1, 2, 2), (1, 3, -2), (2, 3, 1), (2, 4, -1), (3, 4, -6)];
        assert_eq!(mwm(&e), vec![U, 2, 1, U, U]);
        assert_eq!(mwm_card(&e), vec![U, 3, 4, 1, 2]);
    }

    #[test]
    fn s_blossom_augmentation() {
        assert_eq!(
            mwm(&[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7)]),
            vec![U, 2, 1, 4, 3]
        );
        assert_eq!(
            mwm(&[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7), (1, 6, 5), (4, 5, 6)]),
            vec![U, 6, 3, 2, 5, 4, 1]
        );
    }

    #[test]
    fn s_to_t_relabel_augmentation() {
        assert_eq!(
            mwm(&[(1, 2, 9), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 4), (1, 6, 3)]),
            vec![U, 6, 3, 2, 5, 4, 1]
        );
        assert_eq!(
            mwm(&[(1, 2, 9), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 3), (1, 6, 4)]),
            vec![U, 6, 3, 2, 5, 4, 1]
        );
        assert_eq!(
            mwm(&[(1, 2, 9), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 3), (3, 6, 4)]),
            vec![U, 2, 1, 6, 5, 4, 3]
        );
    }

    #[test]
    fn nested_s_blossom_augmentation() {
        assert_eq!(
            mwm(&[
                (1, 2, 9),
                (1, 3, 9),
                (2, 3, 10),
                (2, 4, 8),
                (3, 5, 8),
                (4, 5, 10),
                (5, 6, 6)
            ]),
            vec![U, 3, 4, 1, 2, 6, 5]
        );
    }

    #[test]
    fn nested_s_blossom_relabel_expand() {
        assert_eq!(
            mwm(&[
                (1, 2, 40),
                (1, 3, 40),
                (2, 3, 60),
                (2, 4, 55),
                (3, 5, 55),
                (4, 5, 50),
                (1, 8, 15),
                (5, 7, 30),
                (7, 6, 10),
                (8, 10, 10),
                (4, 9, 30)
            ]),
            vec![U, 2, 1, 5, 9, 3, 7, 6, 10, 4, 8]
        );
    }

    #[test]
    fn t_blossom_nasty_expansion() {
        assert_eq!(
            mwm(&[
                (1, 2, 45),
                (1, 5, 45),
                (2, 3, 50),
                (3, 4, 45),
                (4, 5, 50),
                (1, 6, 30),
                (3, 9, 35),
                (4, 8, 35),
                (5, 7, 26),
                (9, 10, 5)
            ]),
            vec![U, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9]
        );
        assert_eq!(
            mwm(&[
                (1, 2, 45),
                (1, 5, 45),
                (2, 3, 50),
                (3, 4, 45),
                (4, 5, 50),
                (1, 6, 30),
                (3, 9, 35),
                (4, 8, 28),
                (5, 7, 26),
                (9, 10, 5)
            ]),
            vec![U, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9]
        );
    }

    #[test]
    fn min_perfect_on_square() {
        // 4 vertices, cheap pairs (0,1) and (2,3).
        let edges = [
            (0, 1, 1),
            (2, 3, 1),
            (0, 2, 3),
            (1, 3, 3),
            (0, 3, 4),
            (1, 2, 4),
        ];
        let mate = min_weight_perfect_matching(4, &edges).unwrap();
        assert_eq!(mate, vec![1, 0, 3, 2]);
    }

    #[test]
    fn min_perfect_requires_even() {
        assert!(min_weight_perfect_matching(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).is_none());
        assert!(min_weight_perfect_matching(4, &[(0, 1, 1)]).is_none());
    }

    /// Exhaustive pairing enumeration for an n×n weight matrix.
    fn brute_force_min(n: usize, w: &[Vec<Weight>]) -> Weight {
        fn go(remaining: &mut Vec<usize>, w: &[Vec<Weight>]) -> Weight {
            if remaining.is_empty() {
                return 0;
            }
            let first = remaining[0];
            let mut best = Weight::MAX;
            for idx in 1..remaining.len() {
                let partner = remaining[idx];
                let mut rest: Vec<usize> = remaining
                    .iter()
                    .copied()
                    .filter(|&v| v != first && v != partner)
                    .collect();
                let sub = go(&mut rest, w);
                best = best.min(w[first][partner] + sub);
            }
            best
        }
        let mut all: Vec<usize> = (0..n).collect();
        go(&mut all, w)
    }

    #[test]
    fn matches_brute_force_on_random_complete_graphs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12345);
        for trial in 0..300 {
            let n = 2 * rng.gen_range(1..=5usize);
            let mut w = vec![vec![0i64; n]; n];
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let wt = rng.gen_range(0..1_000_000i64);
                    w[i][j] = wt;
                    w[j][i] = wt;
                    edges.push((i, j, wt));
                }
            }
            let mate = min_weight_perfect_matching(n, &edges).unwrap();
            let total: Weight = (0..n)
                .filter(|&i| i < mate[i])
                .map(|i| w[i][mate[i]])
                .sum();
            let best = brute_force_min(n, &w);
            assert_eq!(total, best, "trial {trial}, n {n}");
        }
    }
}
