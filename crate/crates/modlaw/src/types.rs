//! Partitions of the label set and root-tuple types.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::pattern::iter_mask;

/// A partition of labels `0..k`, stored as a restricted growth string:
/// block indices appear in order of first occurrence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionPi {
    block_of: Vec<usize>,
}

impl fmt::Debug for PartitionPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<Vec<usize>> = self.blocks();
        write!(f, "{blocks:?}")
    }
}

impl PartitionPi {
    /// Groups equal entries of `tuple`.
    pub fn from_tuple<T: PartialEq>(tuple: &[T]) -> Self {
        let mut block_of = Vec::with_capacity(tuple.len());
        let mut reps: Vec<&T> = Vec::new();
        for x in tuple {
            match reps.iter().position(|r| *r == x) {
                Some(b) => block_of.push(b),
                None => {
                    block_of.push(reps.len());
                    reps.push(x);
                }
            }
        }
        PartitionPi { block_of }
    }

    pub fn singletons(k: usize) -> Self {
        PartitionPi { block_of: (0..k).collect() }
    }

    pub fn arity(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().map(|b| b + 1).max().unwrap_or(0)
    }

    /// Π(i).
    pub fn block(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    /// Smallest label in block `b`.
    pub fn representative(&self, b: usize) -> usize {
        self.block_of.iter().position(|&x| x == b).expect("block exists")
    }

    /// All partitions of `0..k` in restricted-growth-string order.
    pub fn all(k: usize) -> Vec<PartitionPi> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<PartitionPi>) {
            if cur.len() == k {
                out.push(PartitionPi { block_of: cur.clone() });
                return;
            }
            let next = cur.iter().map(|b| b + 1).max().unwrap_or(0);
            for b in 0..=next {
                cur.push(b);
                rec(k, cur, out);
                cur.pop();
            }
        }
        rec(k, &mut cur, &mut out);
        out
    }

    /// The partition induced on the first `k` labels.
    pub fn restrict(&self, k: usize) -> Self {
        PartitionPi::from_tuple(&self.block_of[..k])
    }
}

/// Equality partition of a root tuple plus the adjacency between its blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeTau {
    partition: PartitionPi,
    /// `block_adj[b]` has bit `c` set iff blocks `b` and `c` are adjacent.
    block_adj: Vec<u32>,
}

impl fmt::Debug for TypeTau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type({:?}, edges={:?})", self.partition, self.block_edges())
    }
}

impl TypeTau {
    pub fn new(partition: PartitionPi, block_edges: &[(usize, usize)]) -> Self {
        let mut block_adj = vec![0u32; partition.block_count()];
        for &(a, b) in block_edges {
            assert!(a != b && a < block_adj.len() && b < block_adj.len(), "bad block edge");
            block_adj[a] |= 1 << b;
            block_adj[b] |= 1 << a;
        }
        TypeTau { partition, block_adj }
    }

    pub fn empty() -> Self {
        TypeTau { partition: PartitionPi::singletons(0), block_adj: Vec::new() }
    }

    pub fn partition(&self) -> &PartitionPi {
        &self.partition
    }

    pub fn arity(&self) -> usize {
        self.partition.arity()
    }

    pub fn block_count(&self) -> usize {
        self.block_adj.len()
    }

    pub fn blocks_adjacent(&self, a: usize, b: usize) -> bool {
        self.block_adj[a] >> b & 1 == 1
    }

    pub fn block_neighbors(&self, b: usize) -> u32 {
        self.block_adj[b]
    }

    pub fn block_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.block_count() {
            for b in iter_mask(self.block_adj[a]) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The type of the first `k` labels.
    pub fn restrict(&self, k: usize) -> TypeTau {
        let sub = self.partition.restrict(k);
        // restriction of a restricted growth string keeps block indices of the prefix
        let blocks = sub.block_count();
        let mask = crate::pattern::full_mask(blocks);
        let block_adj = self.block_adj[..blocks].iter().map(|m| m & mask).collect();
        TypeTau { partition: sub, block_adj }
    }

    /// Whether `self` (over `k+1` labels) extends `tau` (over `k` labels).
    pub fn extends(&self, tau: &TypeTau) -> bool {
        self.arity() == tau.arity() + 1 && &self.restrict(tau.arity()) == tau
    }

    /// For a type over `k+1` labels: `None` if the last label is in a block of
    /// its own, otherwise the block it shares with earlier labels.
    pub fn last_label_merged_into(&self) -> Option<usize> {
        let k = self.arity() - 1;
        let b = self.partition.block(k);
        (0..k).any(|i| self.partition.block(i) == b).then_some(b)
    }

    /// The extension where the new label joins block `b`.
    pub fn extend_merged(&self, b: usize) -> TypeTau {
        let mut partition = self.partition.clone();
        partition.block_of.push(b);
        TypeTau { partition, block_adj: self.block_adj.clone() }
    }

    /// The extension where the new label is a new block adjacent to the
    /// blocks in `adjacent`.
    pub fn extend_singleton(&self, adjacent: u32) -> TypeTau {
        let nb = self.block_count();
        let mut partition = self.partition.clone();
        partition.block_of.push(nb);
        let mut block_adj = self.block_adj.clone();
        block_adj.push(adjacent);
        for b in iter_mask(adjacent) {
            block_adj[b] |= 1 << nb;
        }
        TypeTau { partition, block_adj }
    }

    /// Every type over `k+1` labels extending `self`: merged ones first,
    /// then singletons by adjacency mask.
    pub fn extensions(&self) -> Vec<TypeTau> {
        let nb = self.block_count();
        let mut out: Vec<TypeTau> = (0..nb).map(|b| self.extend_merged(b)).collect();
        out.extend((0..1u32 << nb).map(|m| self.extend_singleton(m)));
        out
    }

    /// All types over `k` labels.
    pub fn all(k: usize) -> Vec<TypeTau> {
        let mut out = Vec::new();
        for pi in PartitionPi::all(k) {
            let nb = pi.block_count();
            let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|a| (a + 1..nb).map(move |b| (a, b))).collect();
            for m in 0..1u64 << pairs.len() {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &e)| e).collect();
                out.push(TypeTau::new(pi.clone(), &edges));
            }
        }
        out
    }
}

pub fn type_of(g: &Graph, w: &[usize]) -> TypeTau {
    let partition = PartitionPi::from_tuple(w);
    let nb = partition.block_count();
    let reps: Vec<usize> = (0..nb).map(|b| w[partition.representative(b)]).collect();
    let mut block_adj = vec![0u32; nb];
    for a in 0..nb {
        for b in 0..nb {
            if a != b && g.adj(reps[a], reps[b]) {
                block_adj[a] |= 1 << b;
            }
        }
    }
    TypeTau { partition, block_adj }
}
