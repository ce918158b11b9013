//! Canonical forms for small (labelled) graphs.
//!
//! The code of a pattern is `[k, n, bits…]` where the bits are the upper
//! triangle of the adjacency matrix in column order `(0,1), (0,2), (1,2),
//! (0,3), …`, packed little-endian into bytes. The canonical code is the
//! lexicographically smallest bit string over all vertex orders that keep
//! label `i` at position `i`. Colour refinement splits the unlabelled vertices
//! into ordered cells; only orders respecting the cells are searched, twins
//! are tried once, and prefixes already worse than the best are cut.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::LabelledGraph;

pub const MAX_CANON_VERTICES: usize = 9;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

impl CanonicalCode {
    pub fn labels(&self) -> usize {
        self.0[0] as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.0[1] as usize
    }

    pub fn unlabelled_count(&self) -> usize {
        self.vertex_count() - self.labels()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn edge_count(&self) -> usize {
        self.0[2..].iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if !s.len().is_multiple_of(2) || s.len() < 4 {
            return Err(Error::InvalidArgument(format!("bad code `{s}`")));
        }
        let bytes: std::result::Result<Vec<u8>, _> =
            (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16)).collect();
        let bytes = bytes.map_err(|_| Error::InvalidArgument(format!("bad code `{s}`")))?;
        let n = bytes[1] as usize;
        if bytes[0] as usize > n || bytes.len() != 2 + (n * n.saturating_sub(1) / 2).div_ceil(8) {
            return Err(Error::InvalidArgument(format!("bad code `{s}`")));
        }
        Ok(CanonicalCode(bytes))
    }

    /// The canonical representative: vertex `i` is the vertex at position `i`
    /// of the minimising order.
    pub fn decode(&self) -> LabelledGraph {
        let (k, n) = (self.labels(), self.vertex_count());
        let mut edges = Vec::new();
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if self.0[2 + idx / 8] >> (idx % 8) & 1 == 1 {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        LabelledGraph::new(k, n, &edges).expect("codes encode valid patterns")
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

fn cache() -> &'static RwLock<HashMap<LabelledGraph, CanonicalCode>> {
    static CACHE: OnceLock<RwLock<HashMap<LabelledGraph, CanonicalCode>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn canonical_form(f: &LabelledGraph) -> Result<CanonicalCode> {
    if f.n() > MAX_CANON_VERTICES {
        return Err(Error::ScaleExceeded(format!(
            "canonical form needs at most {MAX_CANON_VERTICES} vertices, pattern has {}",
            f.n()
        )));
    }
    if let Some(c) = cache().read().expect("canon cache").get(f) {
        return Ok(c.clone());
    }
    let code = compute(f);
    let mut w = cache().write().expect("canon cache");
    if w.len() > 2_000_000 {
        w.clear();
    }
    w.insert(f.clone(), code.clone());
    Ok(code)
}

pub fn canonical_form_graph(g: &Graph) -> Result<CanonicalCode> {
    if g.n() > MAX_CANON_VERTICES {
        return Err(Error::ScaleExceeded(format!("graph with {} vertices is too large to canonicalize", g.n())));
    }
    canonical_form(&LabelledGraph::unlabelled(g)?)
}

/// Canonical code together with the canonical representative.
pub fn canonical_pattern(f: &LabelledGraph) -> Result<(CanonicalCode, LabelledGraph)> {
    let code = canonical_form(f)?;
    let g = code.decode();
    Ok((code, g))
}

fn refine(f: &LabelledGraph) -> Vec<u32> {
    let n = f.n();
    let k = f.labels();
    let mut color: Vec<u32> = (0..n).map(|v| v.min(k) as u32).collect();
    let mut classes = if n > k { k + 1 } else { k };
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = crate::pattern::iter_mask(f.mask(v)).map(|u| color[u]).collect();
                nb.sort_unstable();
                (color[v], nb, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0u32; n];
        let mut c = 0u32;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                c += 1;
            }
            next[sigs[i].2] = c;
        }
        let count = if n == 0 { 0 } else { c as usize + 1 };
        color = next;
        if count == classes {
            return color;
        }
        classes = count;
    }
}

struct Search<'a> {
    f: &'a LabelledGraph,
    n: usize,
    /// Vertices allowed at each position.
    cell_at: Vec<u32>,
    order: Vec<usize>,
    bits: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl Search<'_> {
    fn run(&mut self, pos: usize, used: u32) {
        if pos == self.n {
            if self.best.as_ref().is_none_or(|b| self.bits < *b) {
                self.best = Some(self.bits.clone());
            }
            return;
        }
        let cell = self.cell_at[pos] & !used;
        let start = pos * pos.saturating_sub(1) / 2;
        let end = start + pos;
        let mut tried = 0u32;
        for v in crate::pattern::iter_mask(cell) {
            // a twin already tried at this position gives the same codes
            if crate::pattern::iter_mask(tried).any(|u| self.twins(u, v)) {
                continue;
            }
            tried |= 1 << v;
            for i in 0..pos {
                self.bits[start + i] = self.f.has_edge(self.order[i], v);
            }
            if let Some(best) = &self.best {
                if self.bits[..end] > best[..end] {
                    continue;
                }
            }
            self.order[pos] = v;
            self.run(pos + 1, used | 1 << v);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mu = self.f.mask(u) & !(1 << v);
        let mv = self.f.mask(v) & !(1 << u);
        mu == mv
    }
}

fn compute(f: &LabelledGraph) -> CanonicalCode {
    let n = f.n();
    let color = refine(f);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| (color[v], v));
    let cell_at: Vec<u32> =
        verts.iter().map(|&v| (0..n).filter(|&u| color[u] == color[v]).fold(0u32, |m, u| m | 1 << u)).collect();
    let nbits = n * n.saturating_sub(1) / 2;
    let mut search = Search { f, n, cell_at, order: vec![0; n], bits: vec![false; nbits], best: None };
    search.run(0, 0);
    let best = search.best.unwrap_or_default();
    let mut bytes = vec![f.labels() as u8, n as u8];
    bytes.resize(2 + nbits.div_ceil(8), 0);
    for (i, &b) in best.iter().enumerate() {
        if b {
            bytes[2 + i / 8] |= 1 << (i % 8);
        }
    }
    CanonicalCode(bytes)
}
