use serde::Serialize;
use serde_json::{json, Value};

use super::stats::{chi_square, full_space, statistical_distance, ChiCell, EmpiricalDistribution};
use crate::canon::{canonical_form, CanonicalCode};
use crate::count::{cherries, count_aut, count_inj, triangles};
use crate::error::{Error, Result};
use crate::freq::{enumerate_feasible, freq_on_patterns, FeasibleSet};
use crate::graph::{sample_conditioned_with, sample_gnp_with, Anchor, Graph};
use crate::modular::require_prime;
use crate::pattern::LabelledGraph;
use crate::types::TypeTau;

const CALIBRATION: &str =
    "finite-n gate chosen from multinomial sampling error; the asymptotic closeness bounds have unspecified constants";

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: Value,
    pub samples: u64,
    pub seed: u64,
    pub reference_size: usize,
    pub distance: f64,
    pub chi_square_total: f64,
    pub chi_square: Vec<ChiCell>,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
    pub note: String,
    #[serde(skip)]
    pub empirical: EmpiricalDistribution,
}

impl ExperimentReport {
    fn new(
        experiment: &str,
        parameters: Value,
        e: EmpiricalDistribution,
        reference: &[Vec<u32>],
        threshold: Option<f64>,
    ) -> Self {
        let distance = statistical_distance(&e, reference);
        let chi = chi_square(&e, reference);
        ExperimentReport {
            experiment: experiment.into(),
            parameters,
            samples: e.total,
            seed: e.seed,
            reference_size: reference.len(),
            distance,
            chi_square_total: chi.iter().map(|c| c.contribution).sum(),
            chi_square: chi,
            threshold,
            pass: threshold.map(|t| distance < t),
            note: CALIBRATION.into(),
            empirical: e,
        }
    }

    /// Share of samples equal to `cell`.
    pub fn frequency(&self, cell: &[u32]) -> f64 {
        self.empirical.frequency(cell)
    }
}

fn check_common(n: usize, p: f64, q: u32, samples: u64) -> Result<()> {
    require_prime(q)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one vertex".into()));
    }
    Ok(())
}

/// Unlabelled copy counters with loops for the smallest patterns.
enum Copies {
    Edges,
    Cherries,
    Triangles,
    Generic(LabelledGraph, u128),
}

impl Copies {
    fn new(f: &Graph) -> Result<Copies> {
        if f.n() == 1 {
            return Err(Error::InvalidArgument("K1 has no randomness in its copy count".into()));
        }
        let lf = LabelledGraph::unlabelled(f)?;
        if f.edge_count() == 0 || !lf.is_label_connected() {
            return Err(Error::InvalidArgument("patterns must be connected with at least one edge".into()));
        }
        let code = canonical_form(&lf)?;
        let named = |edges: &[(usize, usize)], n| canonical_form(&LabelledGraph::new(0, n, edges).expect("valid"));
        Ok(if code == named(&[(0, 1)], 2)? {
            Copies::Edges
        } else if code == named(&[(0, 1), (1, 2)], 3)? {
            Copies::Cherries
        } else if code == named(&[(0, 1), (1, 2), (0, 2)], 3)? {
            Copies::Triangles
        } else {
            let aut = count_aut(&lf);
            Copies::Generic(lf, aut)
        })
    }

    fn count(&self, g: &Graph) -> u128 {
        match self {
            Copies::Edges => g.edge_count() as u128,
            Copies::Cherries => cherries(g),
            Copies::Triangles => triangles(g),
            Copies::Generic(f, aut) => count_inj(f, g, &[]) / aut,
        }
    }
}

/// (⟨F₁⟩_q, …, ⟨F_ℓ⟩_q) over G(n, p) against the uniform law on Z_q^ℓ.
pub fn equidist_copies(
    patterns: &[Graph],
    n: usize,
    p: f64,
    q: u32,
    samples: u64,
    seed: u64,
    threshold: Option<f64>,
) -> Result<ExperimentReport> {
    check_common(n, p, q, samples)?;
    if patterns.is_empty() {
        return Err(Error::InvalidArgument("need at least one pattern".into()));
    }
    let mut codes: Vec<CanonicalCode> = Vec::new();
    for f in patterns {
        let c = crate::enumerate::graph_code(f)?;
        if codes.contains(&c) {
            return Err(Error::InvalidArgument("patterns must be pairwise non-isomorphic".into()));
        }
        codes.push(c);
    }
    let counters = patterns.iter().map(Copies::new).collect::<Result<Vec<_>>>()?;
    let qq = q as u128;
    let e = EmpiricalDistribution::collect(samples, seed, 0, |rng| {
        let g = sample_gnp_with(n, p, rng).expect("checked probability");
        counters.iter().map(|c| (c.count(&g) % qq) as u32).collect()
    });
    let params = json!({
        "patterns": patterns.iter().map(|f| f.edges()).collect::<Vec<_>>(),
        "n": n, "p": p, "q": q,
    });
    Ok(ExperimentReport::new("equidist", params, e, &full_space(q, patterns.len()), threshold))
}

/// freq_G^a(∅) over G(n, p) against the uniform law on FFreq_n(∅, ∅, a).
pub fn freq_distribution(
    n: usize,
    p: f64,
    q: u32,
    a: usize,
    samples: u64,
    seed: u64,
    threshold: Option<f64>,
) -> Result<ExperimentReport> {
    check_common(n, p, q, samples)?;
    let fs: FeasibleSet = enumerate_feasible(&TypeTau::empty(), 0, a, q, (n % q as usize) as u32)?;
    let reference: Vec<Vec<u32>> = fs.members()?.map(|f| f.values()).collect();
    let patterns = fs.patterns().to_vec();
    // for a ≤ 3 the four coordinates come from degrees and triangles
    let small = a <= 3;
    let qq = q as u128;
    let e = EmpiricalDistribution::collect(samples, seed, 0, |rng| {
        let g = sample_gnp_with(n, p, rng).expect("checked probability");
        if small {
            let all = [n as u128, 2 * g.edge_count() as u128, 2 * cherries(&g), 6 * triangles(&g)];
            all[..patterns.len()].iter().map(|v| (v % qq) as u32).collect()
        } else {
            freq_on_patterns(&g, &[], &patterns, a, q).values()
        }
    });
    let params = json!({ "n": n, "p": p, "q": q, "a": a });
    Ok(ExperimentReport::new("freqdist", params, e, &reference, threshold))
}

/// Parameters of the rooted equidistribution experiment: base roots
/// w = (0, …, k−1), extra roots u_j = k + j for j < s.
#[derive(Clone, Debug)]
pub struct LabelledSetup {
    pub k: usize,
    /// Patterns over k labels, counted at w.
    pub base_patterns: Vec<LabelledGraph>,
    /// Patterns over k+1 labels dependent on the last one, counted at (w, u_j).
    pub extension_patterns: Vec<LabelledGraph>,
    pub s: usize,
    pub n: usize,
    pub p: f64,
    pub q: u32,
    pub samples: u64,
    pub anchor: Anchor,
    pub seed: u64,
    pub threshold: Option<f64>,
}

/// (⟨F_i⟩_q(G, w), ⟨H_i′⟩_q(G, w, u_j)) over the conditioned random graph,
/// against the uniform law on Z_q^{ℓ+sℓ′}.
pub fn labelled_equidist(setup: &LabelledSetup) -> Result<ExperimentReport> {
    let LabelledSetup { k, s, n, p, q, samples, seed, .. } = *setup;
    check_common(n, p, q, samples)?;
    if k + s > n {
        return Err(Error::InvalidArgument(format!("{} roots do not fit in {n} vertices", k + s)));
    }
    for f in &setup.base_patterns {
        if f.labels() != k || f.unlabelled_count() == 0 || !f.is_label_connected() {
            return Err(Error::InvalidArgument(format!("base patterns must be label-connected over {k} labels")));
        }
    }
    for h in &setup.extension_patterns {
        if h.labels() != k + 1 || !h.depends_on(k) || !h.is_label_connected() {
            return Err(Error::InvalidArgument(format!(
                "extension patterns must be label-connected over {} labels and use the last label",
                k + 1
            )));
        }
    }
    let base: Vec<(LabelledGraph, u128)> = setup.base_patterns.iter().map(|f| (f.clone(), count_aut(f))).collect();
    let ext: Vec<(LabelledGraph, u128)> = setup.extension_patterns.iter().map(|h| (h.clone(), count_aut(h))).collect();
    let w: Vec<usize> = (0..k).collect();
    let qq = q as u128;
    let anchor = &setup.anchor;
    if let Some(&v) = anchor.vertices.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidGraph(format!("anchor vertex {v} outside 0..{n}")));
    }
    let e = EmpiricalDistribution::collect(samples, seed, 0, |rng| {
        let g = sample_conditioned_with(n, p, anchor, rng).expect("checked anchor");
        let mut out: Vec<u32> = base.iter().map(|(f, aut)| (count_inj(f, &g, &w) / aut % qq) as u32).collect();
        let mut roots = w.clone();
        roots.push(0);
        for j in 0..s {
            roots[k] = k + j;
            out.extend(ext.iter().map(|(h, aut)| (count_inj(h, &g, &roots) / aut % qq) as u32));
        }
        out
    });
    let len = base.len() + s * ext.len();
    let params = json!({
        "k": k, "s": s, "n": n, "p": p, "q": q,
        "base_patterns": setup.base_patterns.iter().map(|f| (f.labels(), f.n(), f.edges())).collect::<Vec<_>>(),
        "extension_patterns": setup.extension_patterns.iter().map(|f| (f.labels(), f.n(), f.edges())).collect::<Vec<_>>(),
        "anchor": anchor,
    });
    Ok(ExperimentReport::new("labelled", params, e, &full_space(q, len), setup.threshold))
}
