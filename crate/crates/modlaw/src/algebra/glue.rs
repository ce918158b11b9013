use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::canon::{canonical_form, CanonicalCode};
use crate::count::count_inj;
use crate::error::Result;
use crate::graph::Graph;
use crate::pattern::LabelledGraph;

/// A one-to-one relation between unlabelled vertices of two patterns, as
/// `(vertex of F₁, vertex of F₂)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialMatching {
    pub pairs: Vec<(usize, usize)>,
}

/// Every partial matching, the empty one first.
pub fn partial_matchings(f1: &LabelledGraph, f2: &LabelledGraph) -> Vec<PartialMatching> {
    assert_eq!(f1.labels(), f2.labels(), "patterns must share the label set");
    let left: Vec<usize> = (f1.labels()..f1.n()).collect();
    let right: Vec<usize> = (f2.labels()..f2.n()).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        i: usize,
        left: &[usize],
        right: &[usize],
        used: u32,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<PartialMatching>,
    ) {
        if i == left.len() {
            out.push(PartialMatching { pairs: cur.clone() });
            return;
        }
        rec(i + 1, left, right, used, cur, out);
        for (j, &r) in right.iter().enumerate() {
            if used >> j & 1 == 0 {
                cur.push((left[i], r));
                rec(i + 1, left, right, used | 1 << j, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, &left, &right, 0, &mut cur, &mut out);
    out
}

/// F₁ ∨_η F₂: F₁ plus the unmatched unlabelled vertices of F₂ appended in
/// order, with F₂'s edges carried over and duplicates merged.
pub fn glue(f1: &LabelledGraph, f2: &LabelledGraph, eta: &PartialMatching) -> LabelledGraph {
    let k = f1.labels();
    assert_eq!(k, f2.labels());
    let mut map = vec![usize::MAX; f2.n()];
    for (i, slot) in map.iter_mut().enumerate().take(k) {
        *slot = i;
    }
    for &(a, b) in &eta.pairs {
        assert!(a >= k && b >= k, "only unlabelled vertices can be matched");
        map[b] = a;
    }
    let mut n = f1.n();
    for slot in map.iter_mut().skip(k) {
        if *slot == usize::MAX {
            *slot = n;
            n += 1;
        }
    }
    let mut edges = f1.edges();
    edges.extend(f2.edges().into_iter().map(|(u, v)| (map[u], map[v])));
    edges.sort_unstable_by_key(|&(u, v)| (u.min(v), u.max(v)));
    edges.dedup_by_key(|e| (e.0.min(e.1), e.0.max(e.1)));
    LabelledGraph::new(k, n, &edges).expect("gluing keeps the labelled set independent")
}

/// Integer combination of patterns, keyed by canonical code.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalSum {
    pub terms: BTreeMap<CanonicalCode, BigInt>,
}

impl FormalSum {
    pub fn single(code: CanonicalCode) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(code, BigInt::one());
        FormalSum { terms }
    }

    pub fn add_term(&mut self, code: CanonicalCode, c: BigInt) {
        match self.terms.entry(code) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
        }
    }

    /// Σ c · [F](G, w), exactly.
    pub fn evaluate(&self, g: &Graph, w: &[usize]) -> BigInt {
        self.terms.iter().map(|(code, c)| c * BigInt::from(count_inj(&code.decode(), g, w))).sum()
    }

    /// Multiplies every term by the pattern `h` through [`product_expand`].
    pub fn times(&self, h: &LabelledGraph) -> Result<FormalSum> {
        let mut out = FormalSum::default();
        for (code, c) in &self.terms {
            for (g, d) in product_expand(&code.decode(), h)?.terms {
                out.add_term(g, c * d);
            }
        }
        Ok(out)
    }
}

/// Σ_η [F₁ ∨_η F₂], whose value at any (G, w) is [F₁](G, w)·[F₂](G, w).
pub fn product_expand(f1: &LabelledGraph, f2: &LabelledGraph) -> Result<FormalSum> {
    let mut out = FormalSum::default();
    for eta in partial_matchings(f1, f2) {
        out.add_term(canonical_form(&glue(f1, f2, &eta))?, BigInt::one());
    }
    Ok(out)
}
