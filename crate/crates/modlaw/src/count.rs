//! Exact counting of injective homomorphisms, copies and automorphisms.
//!
//! The counter fixes label `i` at root `w[i]` and extends over the unlabelled
//! pattern vertices in a greedy connected order. Candidates for the next
//! vertex are the intersection of the host rows of its already-placed
//! neighbours minus every used vertex and every root, so the last level is a
//! popcount.

use std::collections::HashSet;

use crate::graph::Graph;
use crate::pattern::{iter_mask, LabelledGraph};

struct Plan {
    /// Unlabelled pattern vertices in placement order.
    order: Vec<usize>,
    /// For each step, the pattern vertices placed earlier (labels included)
    /// that are adjacent to it.
    back: Vec<Vec<usize>>,
}

fn plan(f: &LabelledGraph) -> Plan {
    let k = f.labels();
    let mut placed: u32 = crate::pattern::full_mask(k);
    let mut rest = f.unlabelled_mask();
    let mut order = Vec::new();
    let mut back = Vec::new();
    while rest != 0 {
        let v = iter_mask(rest)
            .max_by_key(|&v| ((f.mask(v) & placed).count_ones(), f.mask(v).count_ones(), std::cmp::Reverse(v)))
            .expect("nonempty");
        back.push(iter_mask(f.mask(v) & placed).collect());
        order.push(v);
        placed |= 1 << v;
        rest &= !(1 << v);
    }
    Plan { order, back }
}

struct Counter<'a> {
    g: &'a Graph,
    plan: Plan,
    words: usize,
    image: Vec<usize>,
    used: Vec<u64>,
    buf: Vec<u64>,
}

impl<'a> Counter<'a> {
    fn new(f: &LabelledGraph, g: &'a Graph, w: &[usize]) -> Option<Counter<'a>> {
        assert_eq!(w.len(), f.labels(), "root tuple arity must equal the label count");
        for &x in w {
            assert!(x < g.n(), "root {x} is not a vertex");
        }
        for (i, j) in f.edges() {
            if j < f.labels() {
                unreachable!("labelled vertices are independent ({i},{j})");
            }
        }
        let words = g.words();
        let mut used = vec![0u64; words];
        for &x in w {
            used[x / 64] |= 1 << (x % 64);
        }
        let distinct_roots: usize = used.iter().map(|x| x.count_ones() as usize).sum();
        if f.unlabelled_count() + distinct_roots > g.n() {
            return None;
        }
        let mut image = vec![usize::MAX; f.n()];
        image[..w.len()].copy_from_slice(w);
        let plan = plan(f);
        let depth = plan.order.len();
        Some(Counter { g, plan, words, image, used, buf: vec![0; words * depth.max(1)] })
    }

    fn candidates(&mut self, step: usize) {
        let words = self.words;
        let n = self.g.n();
        let (lo, hi) = (step * words, (step + 1) * words);
        let back = &self.plan.back[step];
        if back.is_empty() {
            for (i, slot) in self.buf[lo..hi].iter_mut().enumerate() {
                let bits = n.saturating_sub(i * 64).min(64);
                *slot = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
            }
        } else {
            self.buf[lo..hi].copy_from_slice(self.g.row(self.image[back[0]]));
            for &p in &back[1..] {
                let row = self.g.row(self.image[p]);
                for (slot, r) in self.buf[lo..hi].iter_mut().zip(row) {
                    *slot &= r;
                }
            }
        }
        for (slot, u) in self.buf[lo..hi].iter_mut().zip(&self.used) {
            *slot &= !u;
        }
    }

    fn count(&mut self, step: usize) -> u128 {
        let depth = self.plan.order.len();
        if depth == 0 {
            return 1;
        }
        self.candidates(step);
        let words = self.words;
        if step + 1 == depth {
            return self.buf[step * words..(step + 1) * words].iter().map(|x| x.count_ones() as u128).sum();
        }
        let mut total: u128 = 0;
        let pv = self.plan.order[step];
        for wi in 0..words {
            let mut bits = self.buf[step * words + wi];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let x = wi * 64 + b;
                self.image[pv] = x;
                self.used[wi] |= 1 << b;
                let sub = self.count(step + 1);
                total = total.checked_add(sub).expect("homomorphism count overflow");
                self.used[wi] &= !(1 << b);
            }
        }
        total
    }

    fn visit(&mut self, step: usize, out: &mut dyn FnMut(&[usize])) {
        let depth = self.plan.order.len();
        if step == depth {
            out(&self.image);
            return;
        }
        self.candidates(step);
        let words = self.words;
        let pv = self.plan.order[step];
        let snapshot: Vec<u64> = self.buf[step * words..(step + 1) * words].to_vec();
        for (wi, mut bits) in snapshot.into_iter().enumerate() {
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.image[pv] = wi * 64 + b;
                self.used[wi] |= 1 << b;
                self.visit(step + 1, out);
                self.used[wi] &= !(1 << b);
            }
        }
    }
}

/// [F](G, w): injective homomorphisms sending label `i` to `w[i]`.
/// Unlabelled vertices map to distinct vertices outside the roots; repeated
/// roots are allowed.
pub fn count_inj(f: &LabelledGraph, g: &Graph, w: &[usize]) -> u128 {
    match Counter::new(f, g, w) {
        Some(mut c) => c.count(0),
        None => 0,
    }
}

/// Calls `out` with the image of every pattern vertex, once per injective
/// homomorphism.
pub fn for_each_inj(f: &LabelledGraph, g: &Graph, w: &[usize], mut out: impl FnMut(&[usize])) {
    if let Some(mut c) = Counter::new(f, g, w) {
        c.visit(0, &mut out);
    }
}

/// ⟨F⟩(G, w): distinct edge sets χ(E_F).
pub fn count_copies(f: &LabelledGraph, g: &Graph, w: &[usize]) -> u128 {
    copy_sets(f, g, w).len() as u128
}

/// The copies themselves, each as a sorted edge list.
pub fn copy_sets(f: &LabelledGraph, g: &Graph, w: &[usize]) -> HashSet<Vec<(usize, usize)>> {
    let edges = f.edges();
    let mut seen = HashSet::new();
    for_each_inj(f, g, w, |img| {
        let mut set: Vec<(usize, usize)> =
            edges.iter().map(|&(u, v)| (img[u].min(img[v]), img[u].max(img[v]))).collect();
        set.sort_unstable();
        set.dedup();
        seen.insert(set);
    });
    seen
}

/// aut(F): injective homomorphisms F → F fixing every label.
pub fn count_aut(f: &LabelledGraph) -> u128 {
    let w: Vec<usize> = (0..f.labels()).collect();
    count_inj(f, &f.to_host(), &w)
}

/// Number of triangles, by intersecting adjacency rows.
pub fn triangles(g: &Graph) -> u128 {
    let mut total: u128 = 0;
    for (u, v) in g.edges() {
        let common: u32 = g.row(u).iter().zip(g.row(v)).map(|(a, b)| (a & b).count_ones()).sum();
        total += common as u128;
    }
    total / 3
}

/// Copies of the path on three vertices: Σ_v C(deg v, 2).
pub fn cherries(g: &Graph) -> u128 {
    (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u128;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}
