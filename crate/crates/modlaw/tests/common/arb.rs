//! Proptest strategies over the brute-force helpers.
#![allow(dead_code)]

use modlaw::{Graph, LabelledGraph};
use proptest::prelude::*;

use crate::common::{graph_from_mask, random_pattern};

/// Random graph strategy on `lo..=hi` vertices.
pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, any::<u64>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

/// Random pattern with `k` labels and `1..=u_max` unlabelled vertices.
pub fn arb_pattern(k: usize, u_max: usize) -> impl Strategy<Value = LabelledGraph> {
    (1..=u_max, any::<u64>()).prop_map(move |(u, m)| random_pattern(k, u, m))
}
