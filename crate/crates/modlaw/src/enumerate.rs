//! Enumeration of graphs and label-connected patterns up to isomorphism.
//!
//! Orders are fixed: unlabelled graphs by (vertex count, edge count, code),
//! label-connected patterns by (unlabelled count, edge count, code). Frequency
//! vector coordinates follow these orders.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::canon::{canonical_form, canonical_form_graph, CanonicalCode, MAX_CANON_VERTICES};
use crate::count::count_aut;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::{iter_mask, LabelledGraph};

/// A label-connected pattern in canonical form with its automorphism count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub code: CanonicalCode,
    pub graph: LabelledGraph,
    pub aut: u128,
}

impl Pattern {
    pub fn from_code(code: CanonicalCode) -> Pattern {
        let graph = code.decode();
        let aut = count_aut(&graph);
        Pattern { code, graph, aut }
    }

    /// Bit `i` set iff label `i` has an incident edge.
    pub fn dependent_labels(&self) -> u32 {
        (0..self.graph.labels()).filter(|&i| self.graph.depends_on(i)).fold(0, |m, i| m | 1 << i)
    }
}

fn sort_graphs(codes: BTreeSet<CanonicalCode>) -> Vec<CanonicalCode> {
    let mut v: Vec<CanonicalCode> = codes.into_iter().collect();
    v.sort_by(|a, b| (a.unlabelled_count(), a.edge_count(), a).cmp(&(b.unlabelled_count(), b.edge_count(), b)));
    v
}

/// One vertex more: every way of joining a new vertex to the old ones.
fn grow(codes: &[CanonicalCode], connected: bool) -> BTreeSet<CanonicalCode> {
    let mut out = BTreeSet::new();
    for c in codes {
        let g = c.decode();
        let m = g.n();
        let first = if connected { 1 } else { 0 };
        for nb in first..1u32 << m {
            let edges: Vec<(usize, usize)> = g.edges().into_iter().chain(iter_mask(nb).map(|u| (u, m))).collect();
            let h = LabelledGraph::new(0, m + 1, &edges).expect("valid");
            out.insert(canonical_form(&h).expect("small"));
        }
    }
    out
}

type BySize = Arc<Vec<Vec<CanonicalCode>>>;

fn graphs_by_size(connected: bool, n: usize) -> Result<Arc<Vec<Vec<CanonicalCode>>>> {
    static CACHE: OnceLock<Mutex<HashMap<bool, BySize>>> = OnceLock::new();
    if n > MAX_CANON_VERTICES.min(8) {
        return Err(Error::ScaleExceeded(format!("graph enumeration limited to 8 vertices, asked for {n}")));
    }
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("enumeration cache");
    let levels = guard.entry(connected).or_insert_with(|| {
        let k1 = canonical_form(&LabelledGraph::k1(0)).expect("small");
        Arc::new(vec![vec![canonical_form(&LabelledGraph::labels_only(0)).expect("small")], vec![k1]])
    });
    while levels.len() <= n {
        let next = sort_graphs(grow(levels.last().expect("nonempty"), connected));
        Arc::make_mut(levels).push(next);
    }
    Ok(levels.clone())
}

/// Connected graphs on exactly `m` vertices.
pub fn connected_on(m: usize) -> Result<Vec<CanonicalCode>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    Ok(graphs_by_size(true, m)?[m].clone())
}

/// All graphs on exactly `n` vertices, one per isomorphism class.
pub fn all_graphs_on(n: usize) -> Result<Vec<Graph>> {
    Ok(graphs_by_size(false, n)?[n].iter().map(|c| c.decode().to_host()).collect())
}

/// Conn^a: connected graphs on at most `a` vertices.
pub fn enumerate_connected(a: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for m in 1..=a {
        out.extend(connected_on(m)?.into_iter().map(|c| c.decode().to_host()));
    }
    Ok(out)
}

type PatternCache = Mutex<HashMap<(usize, usize), Arc<Vec<Pattern>>>>;

/// Conn_k^t: label-connected patterns over labels `0..k` with between 1 and
/// `t` unlabelled vertices.
pub fn enumerate_label_connected(k: usize, t: usize) -> Result<Arc<Vec<Pattern>>> {
    static CACHE: OnceLock<PatternCache> = OnceLock::new();
    if k + t > MAX_CANON_VERTICES {
        return Err(Error::ScaleExceeded(format!(
            "label-connected patterns with {k} labels and {t} unlabelled vertices exceed {MAX_CANON_VERTICES} vertices"
        )));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("pattern cache").get(&(k, t)) {
        return Ok(hit.clone());
    }
    let mut out: Vec<Pattern> = Vec::new();
    for m in 1..=t {
        out.extend(label_connected_exact(k, m)?.iter().cloned());
    }
    let out = Arc::new(out);
    cache.lock().expect("pattern cache").insert((k, t), out.clone());
    Ok(out)
}

/// Label-connected patterns with exactly `m` unlabelled vertices.
pub fn label_connected_exact(k: usize, m: usize) -> Result<Arc<Vec<Pattern>>> {
    static CACHE: OnceLock<PatternCache> = OnceLock::new();
    if k + m > MAX_CANON_VERTICES {
        return Err(Error::ScaleExceeded(format!("patterns with {} vertices", k + m)));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("pattern cache").get(&(k, m)) {
        return Ok(hit.clone());
    }
    let mut codes = BTreeSet::new();
    for u in connected_on(m)? {
        let ug = u.decode();
        let base: Vec<(usize, usize)> = ug.edges().into_iter().map(|(a, b)| (a + k, b + k)).collect();
        let total = 1u64 << (m * k);
        for choice in 0..total {
            let mut edges = base.clone();
            for i in 0..k {
                let nb = (choice >> (i * m)) & ((1 << m) - 1);
                edges.extend(iter_mask(nb as u32).map(|x| (i, k + x)));
            }
            let f = LabelledGraph::new(k, k + m, &edges).expect("valid");
            codes.insert(canonical_form(&f)?);
        }
    }
    let out: Vec<Pattern> = sort_graphs(codes).into_iter().map(Pattern::from_code).collect();
    let out = Arc::new(out);
    cache.lock().expect("pattern cache").insert((k, m), out.clone());
    Ok(out)
}

/// Code of K₁ over `k` labels.
pub fn k1_code(k: usize) -> CanonicalCode {
    canonical_form(&LabelledGraph::k1(k)).expect("small")
}

/// Code of an unlabelled host graph on at most nine vertices.
pub fn graph_code(g: &Graph) -> Result<CanonicalCode> {
    canonical_form_graph(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts() {
        let counts: Vec<usize> = (1..=6).map(|m| connected_on(m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
        assert_eq!(enumerate_connected(3).unwrap().len(), 4);
        assert_eq!(enumerate_connected(4).unwrap().len(), 10);
    }

    #[test]
    fn all_graph_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| all_graphs_on(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn order_small() {
        let names: Vec<(usize, usize)> =
            enumerate_connected(3).unwrap().iter().map(|g| (g.n(), g.edge_count())).collect();
        assert_eq!(names, vec![(1, 0), (2, 1), (3, 2), (3, 3)]);
    }

    #[test]
    fn rooted_classes() {
        let p = enumerate_label_connected(1, 1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].code, k1_code(1));
        assert_eq!(p[1].graph.edge_count(), 1);
        assert_eq!(p[1].dependent_labels(), 1);
        let plain: Vec<CanonicalCode> =
            enumerate_label_connected(0, 4).unwrap().iter().map(|p| p.code.clone()).collect();
        let direct: Vec<CanonicalCode> =
            enumerate_connected(4).unwrap().iter().map(|g| canonical_form_graph(g).unwrap()).collect();
        assert_eq!(plain, direct);
    }
}
