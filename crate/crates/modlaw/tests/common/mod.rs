//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the counting or canonicalisation code under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use modlaw::{Graph, LabelledGraph};

/// Every permutation of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Every tuple in `0..n` of length `len`.
pub fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Graph on `n` vertices from the bits of `mask` over pairs (i<j) in
/// lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// All 2^C(n,2) graphs on `n` vertices, isomorphic copies included.
pub fn every_graph(n: usize) -> impl Iterator<Item = Graph> {
    (0..1u64 << (n * n.saturating_sub(1) / 2)).map(move |m| graph_from_mask(n, m))
}

/// Every map of the pattern's unlabelled vertices to distinct host vertices
/// outside the roots, with labels sent to the roots.
fn naive_maps(f: &LabelledGraph, g: &Graph, w: &[usize]) -> Vec<Vec<usize>> {
    let k = f.labels();
    let u = f.n() - k;
    let edges = f.edges();
    tuples(g.n(), u)
        .into_iter()
        .filter_map(|t| {
            let distinct: BTreeSet<usize> = t.iter().copied().collect();
            if distinct.len() != u || t.iter().any(|v| w.contains(v)) {
                return None;
            }
            let mut phi = w.to_vec();
            phi.extend(t);
            edges.iter().all(|&(a, b)| g.adj(phi[a], phi[b])).then_some(phi)
        })
        .collect()
}

pub fn naive_inj(f: &LabelledGraph, g: &Graph, w: &[usize]) -> u128 {
    naive_maps(f, g, w).len() as u128
}

pub fn naive_copies(f: &LabelledGraph, g: &Graph, w: &[usize]) -> BTreeSet<Vec<(usize, usize)>> {
    let edges = f.edges();
    naive_maps(f, g, w)
        .into_iter()
        .map(|phi| {
            let mut s: Vec<(usize, usize)> =
                edges.iter().map(|&(a, b)| (phi[a].min(phi[b]), phi[a].max(phi[b]))).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

pub fn naive_aut(f: &LabelledGraph) -> u128 {
    let w: Vec<usize> = (0..f.labels()).collect();
    naive_inj(f, &f.to_host(), &w)
}

fn edge_set(edges: &[(usize, usize)], perm: &[usize]) -> BTreeSet<(usize, usize)> {
    edges.iter().map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v]))).collect()
}

/// Isomorphism by trying every vertex permutation.
pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let target: BTreeSet<(usize, usize)> = b.edges().into_iter().collect();
    let ea = a.edges();
    permutations(a.n()).iter().any(|p| edge_set(&ea, p) == target)
}

/// Label-preserving isomorphism by permuting the unlabelled vertices.
pub fn brute_labelled_isomorphic(a: &LabelledGraph, b: &LabelledGraph) -> bool {
    if a.labels() != b.labels() || a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let k = a.labels();
    let target: BTreeSet<(usize, usize)> = b.edges().into_iter().collect();
    let ea = a.edges();
    permutations(a.n() - k).iter().any(|p| {
        let full: Vec<usize> = (0..k).chain(p.iter().map(|&x| x + k)).collect();
        edge_set(&ea, &full) == target
    })
}

/// Pattern from the bits of `mask` over the pairs not inside the labels.
pub fn random_pattern(k: usize, u: usize, mask: u64) -> LabelledGraph {
    let n = k + u;
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i.max(k)..n {
            if i == j {
                continue;
            }
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    LabelledGraph::new(k, n, &edges).unwrap()
}

/// Canonical representatives of every pattern with `labels` labels and
/// `1..=u_max` unlabelled vertices (label-connected or not).
pub fn all_patterns(labels: usize, u_max: usize) -> Vec<LabelledGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for u in 1..=u_max {
        for mask in 0..1u64 << (labels * u + u * (u - 1) / 2) {
            let f = random_pattern(labels, u, mask);
            let code = modlaw::canonical_form(&f).unwrap();
            if seen.insert(code.clone()) {
                out.push(code.decode());
            }
        }
    }
    out
}

/// The fixed sentence suite: formula, modulus, and its limit profile as
/// (numerator, q-exponent) per residue.
pub type Profile = &'static [(u128, u32)];

pub const SUITE: [(&str, u32, Profile); 8] = [
    ("exists x. x = x", 2, &[(1, 0), (1, 0)]),
    ("parity x. x = x", 2, &[(0, 0), (1, 0)]),
    ("parity x. parity y. E(x,y)", 2, &[(0, 0), (0, 0)]),
    ("forall x. parity y. E(x,y)", 2, &[(0, 0), (0, 0)]),
    ("mod[3,0] x. mod[3,1] y. E(x,y)", 3, &[(1, 1), (1, 1), (1, 1)]),
    ("exists x. !parity y. E(x,y)", 2, &[(1, 0), (1, 0)]),
    ("mod[3,1] x. mod[3,1] y. (E(x,y) | x = y)", 3, &[(1, 1), (1, 1), (1, 1)]),
    ("mod[3,2] x. exists y. !E(x,y)", 3, &[(0, 0), (0, 0), (1, 0)]),
];

/// The formula itself followed by every quantified subformula's body.
pub fn formula_and_bodies(phi: &modlaw::logic::Formula) -> Vec<modlaw::logic::Formula> {
    use modlaw::logic::Formula::*;
    let mut out = vec![phi.clone()];
    match phi {
        Edge(..) | Equal(..) => {}
        Not(a) => out.extend(formula_and_bodies(a).into_iter().skip(1)),
        And(a, b) | Or(a, b) => {
            out.extend(formula_and_bodies(a).into_iter().skip(1));
            out.extend(formula_and_bodies(b).into_iter().skip(1));
        }
        Exists(_, body) | Forall(_, body) | ModQ { body, .. } => out.extend(formula_and_bodies(body)),
    }
    out
}

/// Fraction of graphs from G(n, 1/2) (seeds `0..graphs`) on which ψ and
/// direct evaluation disagree, for the formula or any quantifier body, at
/// some assignment of its free variables.
pub fn disagreement_rate(text: &str, q: u32, n: usize, graphs: u64) -> f64 {
    use modlaw::elimination::build_psi_open;
    use modlaw::logic::CompiledFormula;
    let phi = modlaw::logic::parse(text).unwrap();
    let parts: Vec<_> = formula_and_bodies(&phi)
        .into_iter()
        .map(|f| {
            let free: Vec<String> = f.free_variables().into_iter().collect();
            let psi = build_psi_open(&f, &free, q, None).unwrap();
            let compiled = CompiledFormula::compile(&f, &free).unwrap();
            (free.len(), psi, compiled)
        })
        .collect();
    let mut bad = 0;
    for seed in 0..graphs {
        let g = modlaw::graph::sample_gnp(n, 0.5, seed).unwrap();
        let disagree = parts.iter().any(|(k, psi, compiled)| {
            tuples(n, *k).iter().any(|w| compiled.eval(&g, w) != psi.eval_graph(&g, w).unwrap())
        });
        bad += u64::from(disagree);
    }
    bad as f64 / graphs as f64
}
