use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::rng::{task_rng, Rng};

/// Monte Carlo work is cut into this many tasks, each with its own derived
/// stream, whatever the thread count.
pub const TASKS: u64 = 64;

/// Observed vectors over Z_q^ℓ and how often each occurred.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    pub counts: BTreeMap<Vec<u32>, u64>,
    pub total: u64,
    pub seed: u64,
}

impl EmpiricalDistribution {
    pub fn from_counts(counts: BTreeMap<Vec<u32>, u64>, seed: u64) -> Self {
        let total = counts.values().sum();
        EmpiricalDistribution { counts, total, seed }
    }

    pub fn frequency(&self, x: &[u32]) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(x).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Draws `samples` vectors with `draw`, task `i` using stream `(seed, offset + i)`.
    pub fn collect(samples: u64, seed: u64, offset: u64, draw: impl Fn(&mut Rng) -> Vec<u32> + Sync) -> Self {
        let per = samples / TASKS;
        let extra = samples % TASKS;
        let counts = (0..TASKS)
            .into_par_iter()
            .map(|task| {
                let mut rng = task_rng(seed, offset + task);
                let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
                for _ in 0..per + u64::from(task < extra) {
                    *counts.entry(draw(&mut rng)).or_default() += 1;
                }
                counts
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        EmpiricalDistribution { counts, total: samples, seed }
    }
}

/// ½ Σ |empirical − uniform(reference)| over the union of supports.
pub fn statistical_distance(e: &EmpiricalDistribution, reference: &[Vec<u32>]) -> f64 {
    assert!(!reference.is_empty(), "reference set must be nonempty");
    let reference: BTreeSet<&Vec<u32>> = reference.iter().collect();
    let r = 1.0 / reference.len() as f64;
    let mut total = 0.0;
    for x in &reference {
        total += (e.frequency(x) - r).abs();
    }
    for x in e.counts.keys() {
        if !reference.contains(x) {
            total += e.frequency(x);
        }
    }
    total / 2.0
}

/// ½ Σ |e₁ − e₂| between two empirical distributions.
pub fn distance_between(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let keys: BTreeSet<&Vec<u32>> = a.counts.keys().chain(b.counts.keys()).collect();
    keys.into_iter().map(|x| (a.frequency(x) - b.frequency(x)).abs()).sum::<f64>() / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiCell {
    pub cell: Vec<u32>,
    pub observed: u64,
    pub expected: f64,
    pub contribution: f64,
}

/// Per-cell (O − E)²/E against the uniform distribution on `reference`.
pub fn chi_square(e: &EmpiricalDistribution, reference: &[Vec<u32>]) -> Vec<ChiCell> {
    let expected = e.total as f64 / reference.len() as f64;
    reference
        .iter()
        .map(|x| {
            let observed = e.counts.get(x).copied().unwrap_or(0);
            let diff = observed as f64 - expected;
            ChiCell { cell: x.clone(), observed, expected, contribution: diff * diff / expected }
        })
        .collect()
}

/// Every vector of Z_q^len, first coordinate varying fastest.
pub fn full_space(q: u32, len: usize) -> Vec<Vec<u32>> {
    let size = (q as usize).pow(len as u32);
    (0..size).map(|i| crate::modular::digits(i, q, len)).collect()
}
