//! Labelled pattern graphs.
//!
//! A pattern over labels `0..k` always stores label `i` at vertex `i`; the
//! unlabelled vertices follow at `k..n`. Adjacency is a `u32` mask per vertex,
//! which bounds patterns at 32 vertices (canonical forms are limited further).

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::types::PartitionPi;

pub const MAX_PATTERN_VERTICES: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledGraph {
    labels: usize,
    adj: Vec<u32>,
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelledGraph(k={}, n={}, edges={:?})", self.labels, self.n(), self.edges())
    }
}

impl LabelledGraph {
    /// Pattern on `n` vertices whose first `labels` vertices carry labels
    /// `0..labels`. Fails if an edge joins two labelled vertices.
    pub fn new(labels: usize, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_PATTERN_VERTICES || labels > n {
            return Err(Error::InvalidGraph(format!("pattern with {labels} labels and {n} vertices")));
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidGraph(format!("bad pattern edge ({u},{v})")));
            }
            if u < labels && v < labels {
                return Err(Error::InvalidGraph(format!("labelled vertices {u},{v} must be independent")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(LabelledGraph { labels, adj })
    }

    /// Pattern where label `i` sits at the arbitrary vertex `label_at[i]`; the
    /// vertices are renumbered so labels come first.
    pub fn with_labels_at(n: usize, edges: &[(usize, usize)], label_at: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = label_at.to_vec();
        let mut seen = vec![false; n];
        for &v in label_at {
            if v >= n || seen[v] {
                return Err(Error::InvalidGraph("label map must be injective into the vertices".into()));
            }
            seen[v] = true;
        }
        order.extend((0..n).filter(|&v| !seen[v]));
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mapped: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
        LabelledGraph::new(label_at.len(), n, &mapped)
    }

    pub fn unlabelled(g: &Graph) -> Result<Self> {
        LabelledGraph::new(0, g.n(), &g.edges())
    }

    pub(crate) fn from_masks(labels: usize, adj: Vec<u32>) -> Self {
        debug_assert!((0..labels).all(|i| adj[i] & full_mask(labels) == 0));
        LabelledGraph { labels, adj }
    }

    /// K₁(I): the labels plus one isolated unlabelled vertex.
    pub fn k1(labels: usize) -> Self {
        LabelledGraph { labels, adj: vec![0; labels + 1] }
    }

    /// The pattern consisting of the labelled vertices only.
    pub fn labels_only(labels: usize) -> Self {
        LabelledGraph { labels, adj: vec![0; labels] }
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn unlabelled_count(&self) -> usize {
        self.n() - self.labels
    }

    #[inline]
    pub fn mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn masks(&self) -> &[u32] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn unlabelled_mask(&self) -> u32 {
        full_mask(self.n()) & !full_mask(self.labels)
    }

    /// Whether label `i` has an incident edge.
    pub fn depends_on(&self, i: usize) -> bool {
        self.adj[i] != 0
    }

    /// Connected components of the unlabelled part, each as a vertex mask,
    /// ordered by smallest vertex.
    pub fn unlabelled_components(&self) -> Vec<u32> {
        let mut rest = self.unlabelled_mask();
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut comp = 1u32 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & rest & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// F ∖ L(F) is nonempty and connected.
    pub fn is_label_connected(&self) -> bool {
        self.unlabelled_components().len() == 1
    }

    /// The pattern as an ordinary host graph (labels dropped).
    pub fn to_host(&self) -> Graph {
        Graph::from_edges(self.n(), &self.edges()).expect("pattern is simple")
    }

    /// Keeps the labels and the unlabelled vertices in `keep`, in their order.
    pub fn restrict_unlabelled(&self, keep: u32) -> Self {
        let verts: Vec<usize> = (0..self.labels).chain(iter_mask(keep & self.unlabelled_mask())).collect();
        self.induced_on(self.labels, &verts)
    }

    /// Induced subpattern on `verts` (new vertex `i` is `verts[i]`), whose
    /// first `labels` entries become the labels.
    fn induced_on(&self, labels: usize, verts: &[usize]) -> Self {
        let mut adj = vec![0u32; verts.len()];
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    adj[i] |= 1 << j;
                }
            }
        }
        LabelledGraph { labels, adj }
    }

    /// F/Π: labels in one block are identified into one labelled vertex,
    /// labelled by the block index.
    pub fn quotient(&self, pi: &PartitionPi) -> Self {
        assert_eq!(pi.arity(), self.labels, "partition arity must match the label count");
        let blocks = pi.block_count();
        let n = blocks + self.unlabelled_count();
        let map = |v: usize| if v < self.labels { pi.block(v) } else { v - self.labels + blocks };
        let mut adj = vec![0u32; n];
        for (u, v) in self.edges() {
            let (a, b) = (map(u), map(v));
            assert!(a != b, "labelled vertices are independent so no loop can appear");
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        LabelledGraph::from_masks(blocks, adj)
    }

    /// F̃: adds a new isolated label `k` (the old unlabelled vertices shift up by one).
    pub fn with_isolated_label(&self) -> Self {
        let k = self.labels;
        let mut verts: Vec<Option<usize>> = (0..k).map(Some).collect();
        verts.push(None);
        verts.extend((k..self.n()).map(Some));
        self.rebuild(k + 1, &verts)
    }

    /// Inverse of [`with_isolated_label`](Self::with_isolated_label): drops the
    /// last label, which must be isolated.
    pub fn drop_isolated_last_label(&self) -> Self {
        let k = self.labels - 1;
        assert_eq!(self.adj[k], 0, "last label must be isolated");
        let verts: Vec<usize> = (0..k).chain(k + 1..self.n()).collect();
        self.induced_on(k, &verts)
    }

    /// F_u: the unlabelled vertex `u` becomes the new label `k`, and its edges
    /// to the existing labels are deleted.
    pub fn attach_label(&self, u: usize) -> Self {
        let k = self.labels;
        assert!(u >= k && u < self.n(), "u must be unlabelled");
        let mut verts: Vec<usize> = (0..k).collect();
        verts.push(u);
        verts.extend((k..self.n()).filter(|&v| v != u));
        let mut g = self.induced_on(k + 1, &verts);
        let labels_mask = full_mask(k);
        g.adj[k] &= !labels_mask;
        for i in 0..k {
            g.adj[i] &= !(1 << k);
        }
        g
    }

    /// Makes the last label `k-1` unlabelled after joining it to the labels
    /// in `to_labels`. Vertex indices do not move.
    pub fn unlabel_last(&self, to_labels: u32) -> Self {
        let k = self.labels - 1;
        assert_eq!(to_labels & !full_mask(k), 0, "only earlier labels can be joined");
        let mut adj = self.adj.clone();
        adj[k] |= to_labels;
        for i in iter_mask(to_labels) {
            adj[i] |= 1 << k;
        }
        LabelledGraph::from_masks(k, adj)
    }

    /// Identifies the last label with label `j`.
    pub fn merge_last_label_into(&self, j: usize) -> Self {
        let k = self.labels - 1;
        assert!(j < k);
        let mut adj = self.adj.clone();
        let moved = adj[k];
        adj[j] |= moved;
        for v in iter_mask(moved) {
            adj[v] |= 1 << j;
        }
        let merged = LabelledGraph::from_masks(self.labels, adj);
        let verts: Vec<usize> = (0..k).chain(k + 1..self.n()).collect();
        merged.induced_on(k, &verts)
    }

    /// Renumbers vertices: new vertex `i` is `verts[i]`, or a fresh isolated
    /// vertex when `None`.
    fn rebuild(&self, labels: usize, verts: &[Option<usize>]) -> Self {
        let mut adj = vec![0u32; verts.len()];
        for (i, a) in verts.iter().enumerate() {
            for (j, b) in verts.iter().enumerate() {
                if let (Some(u), Some(v)) = (a, b) {
                    if self.has_edge(*u, *v) {
                        adj[i] |= 1 << j;
                    }
                }
            }
        }
        LabelledGraph::from_masks(labels, adj)
    }

    /// Applies a permutation of the unlabelled vertices: unlabelled vertex at
    /// offset `i` moves to offset `perm[i]`.
    pub fn permute_unlabelled(&self, perm: &[usize]) -> Self {
        let k = self.labels;
        let mut verts = vec![0usize; self.n()];
        for (i, v) in verts.iter_mut().enumerate().take(k) {
            *v = i;
        }
        for (i, &p) in perm.iter().enumerate() {
            verts[k + p] = k + i;
        }
        self.induced_on(k, &verts)
    }
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn iter_mask(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}
