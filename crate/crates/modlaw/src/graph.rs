//! Host graphs and random-graph sampling.

use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Simple undirected graph on `0..n`, stored as one adjacency bitset per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, rows: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if g.adj(u, v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn adj(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u},{v})");
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adj(u, v))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.adj(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        Graph::try_from(raw)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson { n: g.n, edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(raw: GraphJson) -> Result<Graph> {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for [u, v] in raw.edges {
            if u >= v {
                return Err(Error::InvalidGraph(format!("edge [{u},{v}] must satisfy u < v")));
            }
            edges.push((u, v));
        }
        Graph::from_edges(raw.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::try_from(raw).map_err(serde::de::Error::custom)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p.to_string()))
    }
}

/// Fills every pair `u < v` in lexicographic order with an independent
/// `p`-coin, except pairs for which `fixed` returns a value.
fn fill_pairs(n: usize, p: f64, rng: &mut Rng, fixed: impl Fn(usize, usize) -> Option<bool>) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let present = match fixed(u, v) {
                Some(b) => b,
                None => rng.gen::<f64>() < p,
            };
            if present {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// G(n, p) drawn from an explicit stream.
pub fn sample_gnp_with(n: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    check_p(p)?;
    Ok(fill_pairs(n, p, rng, |_, _| None))
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    sample_gnp_with(n, p, &mut rng::seeded(seed))
}

/// The fixed part of a conditioned random graph: a vertex set `V_A` and the
/// exact edge set `E_A` it must induce.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Anchor {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Anchor {
    pub fn new(vertices: impl IntoIterator<Item = usize>, edges: &[(usize, usize)]) -> Result<Anchor> {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v || !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::InvalidGraph(format!("anchor edge ({u},{v}) not inside V_A")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Anchor { vertices, edges: set })
    }

    fn fixed(&self, u: usize, v: usize) -> Option<bool> {
        (self.vertices.contains(&u) && self.vertices.contains(&v)).then(|| self.edges.contains(&(u, v)))
    }
}

pub fn sample_conditioned_with(n: usize, p: f64, anchor: &Anchor, rng: &mut Rng) -> Result<Graph> {
    check_p(p)?;
    if let Some(&v) = anchor.vertices.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidGraph(format!("anchor vertex {v} outside 0..{n}")));
    }
    Ok(fill_pairs(n, p, rng, |u, v| anchor.fixed(u, v)))
}

pub fn sample_conditioned(n: usize, p: f64, anchor: &Anchor, seed: u64) -> Result<Graph> {
    sample_conditioned_with(n, p, anchor, &mut rng::seeded(seed))
}
