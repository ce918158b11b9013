use serde::Serialize;

use super::stats::{EmpiricalDistribution, TASKS};
use crate::elimination::{limit_probabilities, LimitProfile};
use crate::error::{Error, Result};
use crate::graph::sample_gnp_with;
use crate::logic::{CompiledFormula, Formula};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub empirical: f64,
    pub limit: f64,
    pub diff: f64,
    /// √(a(1−a)/samples) at the limit value a.
    pub sigma: f64,
    pub within_3_sigma: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub formula: String,
    pub q: u32,
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
    pub profile: LimitProfile,
    pub rows: Vec<ConvergenceRow>,
    pub pass: bool,
}

/// Empirical Pr[G(n, p) ⊨ φ] for each n against a_{n mod q}.
pub fn convergence_experiment(
    phi: &Formula,
    q: u32,
    p: f64,
    n_list: &[usize],
    samples: u64,
    seed: u64,
    c_cap: Option<usize>,
) -> Result<ConvergenceReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let profile = limit_probabilities(phi, q, c_cap)?;
    let compiled = CompiledFormula::compile(phi, &[])?;
    let mut rows = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        let e = EmpiricalDistribution::collect(samples, seed, i as u64 * TASKS, |rng| {
            let g = sample_gnp_with(n, p, rng).expect("checked probability");
            vec![u32::from(compiled.eval(&g, &[]))]
        });
        let empirical = e.frequency(&[1]);
        let limit = profile.for_n(n);
        let sigma = (limit * (1.0 - limit) / samples as f64).sqrt();
        let diff = (empirical - limit).abs();
        rows.push(ConvergenceRow { n, empirical, limit, diff, sigma, within_3_sigma: diff <= 3.0 * sigma });
    }
    Ok(ConvergenceReport {
        formula: phi.to_string(),
        q,
        p,
        samples,
        seed,
        pass: rows.iter().all(|r| r.within_3_sigma),
        profile,
        rows,
    })
}
