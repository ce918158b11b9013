#[path = "common/arb.rs"]
mod arb;
mod common;

use std::collections::{BTreeMap, BTreeSet};

use arb::*;
use common::*;
use modlaw::canon::{canonical_form, canonical_form_graph, MAX_CANON_VERTICES};
use modlaw::enumerate::{enumerate_connected, enumerate_label_connected, graph_code};
use modlaw::graph::{sample_conditioned, sample_gnp, Anchor};
use modlaw::types::{type_of, PartitionPi};
use modlaw::{Graph, LabelledGraph};
use proptest::prelude::*;

#[test]
fn canonical_codes_match_brute_force_isomorphism() {
    // graphs on n vertices up to isomorphism: 1, 2, 4, 11, 34, 156
    let classes = [1usize, 2, 4, 11, 34, 156];
    for n in 1..=6 {
        let mut groups: BTreeMap<Vec<u8>, Vec<Graph>> = BTreeMap::new();
        for g in every_graph(n) {
            groups.entry(canonical_form_graph(&g).unwrap().bytes().to_vec()).or_default().push(g);
        }
        assert_eq!(groups.len(), classes[n - 1], "n={n}");
        if n <= 5 {
            for members in groups.values() {
                for g in members {
                    assert!(brute_isomorphic(&members[0], g));
                }
            }
            let reps: Vec<&Graph> = groups.values().map(|m| &m[0]).collect();
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    assert!(!brute_isomorphic(reps[i], reps[j]));
                }
            }
        }
    }
}

#[test]
fn canonical_examples() {
    let abc = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let cba = Graph::from_edges(3, &[(2, 1), (1, 0)]).unwrap();
    let k3 = Graph::complete(3);
    assert_eq!(graph_code(&abc).unwrap(), graph_code(&cba).unwrap());
    assert_ne!(graph_code(&abc).unwrap(), graph_code(&k3).unwrap());
    let g = sample_gnp(4, 0.5, 3).unwrap();
    let codes: BTreeSet<_> = permutations(4).iter().map(|p| graph_code(&g.permuted(p)).unwrap()).collect();
    assert_eq!(codes.len(), 1);
    assert!(graph_code(&Graph::empty(MAX_CANON_VERTICES + 1)).is_err());
}

#[test]
fn labelled_codes_match_brute_force() {
    let mut seen: Vec<(LabelledGraph, Vec<u8>)> = Vec::new();
    for k in 0..=2 {
        for u in 1..=3 {
            for mask in 0..1u64 << (k * u + u * (u - 1) / 2) {
                let f = random_pattern(k, u, mask);
                seen.push((f.clone(), canonical_form(&f).unwrap().bytes().to_vec()));
            }
        }
    }
    let mut rng = 17u64;
    for _ in 0..4000 {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let i = (rng >> 33) as usize % seen.len();
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (rng >> 33) as usize % seen.len();
        let (a, ca) = &seen[i];
        let (b, cb) = &seen[j];
        assert_eq!(ca == cb, brute_labelled_isomorphic(a, b), "{a:?} vs {b:?}");
    }
    // a label swap is not a label-preserving isomorphism
    let left = LabelledGraph::new(2, 3, &[(0, 2)]).unwrap();
    let right = LabelledGraph::new(2, 3, &[(1, 2)]).unwrap();
    assert_ne!(canonical_form(&left).unwrap(), canonical_form(&right).unwrap());
}

#[test]
fn connected_enumeration_matches_filtered_recount() {
    fn connected(g: &Graph) -> bool {
        let mut seen = vec![false; g.n()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
    let mut recount = 0;
    for a in 1..=5 {
        let mut reps: Vec<Graph> = Vec::new();
        for g in every_graph(a).filter(connected) {
            if !reps.iter().any(|r| brute_isomorphic(r, &g)) {
                reps.push(g);
            }
        }
        recount += reps.len();
        let listed = enumerate_connected(a).unwrap();
        assert_eq!(listed.len(), recount, "a={a}");
        assert!(listed.iter().all(connected));
    }
    let sizes: Vec<usize> = (1..=4).map(|a| enumerate_connected(a).unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 2, 4, 10]);
    let four = enumerate_connected(3).unwrap();
    let shape: Vec<(usize, usize)> = four.iter().map(|g| (g.n(), g.edge_count())).collect();
    assert_eq!(shape, vec![(1, 0), (2, 1), (3, 2), (3, 3)]);
}

#[test]
fn label_connected_enumeration() {
    let none = enumerate_label_connected(0, 4).unwrap();
    let plain = enumerate_connected(4).unwrap();
    assert_eq!(none.len(), plain.len());
    for (p, g) in none.iter().zip(&plain) {
        assert_eq!(p.code, graph_code(g).unwrap());
    }
    let one = enumerate_label_connected(1, 1).unwrap();
    assert_eq!(one.len(), 2);
    assert_eq!(one[0].graph.edge_count(), 0);
    assert_eq!(one[1].graph.edge_count(), 1);
    assert_eq!(one[1].dependent_labels(), 1);
    // recount by brute force over all patterns with k labels and ≤ t unlabelled vertices
    for (k, t) in [(1, 3), (2, 2), (3, 1)] {
        let mut reps: Vec<LabelledGraph> = Vec::new();
        for u in 1..=t {
            for mask in 0..1u64 << (k * u + u * (u - 1) / 2) {
                let f = random_pattern(k, u, mask);
                if f.is_label_connected() && !reps.iter().any(|r| brute_labelled_isomorphic(r, &f)) {
                    reps.push(f);
                }
            }
        }
        let listed = enumerate_label_connected(k, t).unwrap();
        assert_eq!(listed.len(), reps.len(), "k={k} t={t}");
        for p in listed.iter() {
            assert!(p.graph.is_label_connected());
        }
    }
}

#[test]
fn sampling() {
    assert_eq!(sample_gnp(0, 0.5, 7).unwrap().n(), 0);
    assert_eq!(sample_gnp(5, 0.5, 42).unwrap(), sample_gnp(5, 0.5, 42).unwrap());
    assert!(sample_gnp(5, 0.0, 1).is_err());
    assert!(sample_gnp(5, 1.0, 1).is_err());
    let n = 1000usize;
    let pairs = (n * (n - 1) / 2) as f64;
    let sigma = (pairs * 0.25).sqrt();
    for seed in 0..100 {
        let e = sample_gnp(n, 0.5, seed).unwrap().edge_count() as f64;
        assert!((e - pairs / 2.0).abs() <= 4.0 * sigma, "seed {seed}: {e}");
    }
}

#[test]
fn conditioned_sampling() {
    let full = Anchor::new(0..5, &Graph::complete(5).edges()).unwrap();
    assert_eq!(sample_conditioned(5, 0.3, &full, 1).unwrap(), Graph::complete(5));
    let empty = Anchor::default();
    assert_eq!(sample_conditioned(9, 0.3, &empty, 4).unwrap(), sample_gnp(9, 0.3, 4).unwrap());
    let edge = Anchor::new([0, 1], &[(0, 1)]).unwrap();
    let mut free = [0u32; 15];
    let seeds = 10_000;
    for seed in 0..seeds {
        let g = sample_conditioned(6, 0.3, &edge, seed).unwrap();
        assert!(g.adj(0, 1));
        let mut i = 0;
        for u in 0..6 {
            for v in u + 1..6 {
                free[i] += u32::from(g.adj(u, v));
                i += 1;
            }
        }
    }
    let sigma = (seeds as f64 * 0.3 * 0.7).sqrt();
    for (i, &c) in free.iter().enumerate().skip(1) {
        assert!((c as f64 - 0.3 * seeds as f64).abs() <= 4.0 * sigma, "pair {i}: {c}");
    }
    assert!(sample_conditioned(4, 0.5, &Anchor::new([7], &[]).unwrap(), 0).is_err());
    assert!(Anchor::new([0, 1], &[(0, 2)]).is_err());
}

#[test]
fn types_and_quotients() {
    let k3 = Graph::complete(3);
    assert_eq!(type_of(&k3, &[]).block_count(), 0);
    let same = type_of(&k3, &[0, 0]);
    assert_eq!(same.block_count(), 1);
    assert!(same.block_edges().is_empty());
    let two = type_of(&k3, &[0, 1]);
    assert_eq!((two.block_count(), two.block_edges()), (2, vec![(0, 1)]));

    let f = LabelledGraph::new(2, 3, &[(0, 2), (1, 2)]).unwrap();
    let id = f.quotient(&PartitionPi::singletons(2));
    assert_eq!(canonical_form(&id).unwrap(), canonical_form(&f).unwrap());
    let merged = f.quotient(&PartitionPi::from_tuple(&[5, 5]));
    assert_eq!((merged.labels(), merged.n(), merged.edge_count()), (1, 2, 1));
}

#[test]
fn graph_json() {
    let g = Graph::from_json(r#"{"n":3,"edges":[[0,1],[1,2]]}"#).unwrap();
    assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    assert!(Graph::from_json(r#"{"n":3,"edges":[[1,0]]}"#).is_err());
    assert!(Graph::from_json(r#"{"n":3,"edges":[[1,1]]}"#).is_err());
    assert!(Graph::from_json(r#"{"n":3,"edges":[[0,3]]}"#).is_err());
}

proptest! {
    #[test]
    fn codes_are_permutation_invariant(g in arb_graph(1, 7), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(graph_code(&g).unwrap(), graph_code(&g.permuted(&perm)).unwrap());
    }

    #[test]
    fn adjacency_is_symmetric(g in arb_graph(0, 9)) {
        for u in 0..g.n() {
            prop_assert!(!g.adj(u, u));
            for v in 0..g.n() {
                prop_assert_eq!(g.adj(u, v), g.adj(v, u));
            }
        }
    }

    #[test]
    fn decode_roundtrip(f in arb_pattern(2, 4)) {
        let code = canonical_form(&f).unwrap();
        prop_assert!(brute_labelled_isomorphic(&code.decode(), &f));
        prop_assert_eq!(canonical_form(&code.decode()).unwrap(), code);
    }
}
