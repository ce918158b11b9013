//! One check per acceptance criterion, shared by the library tests and the
//! acceptance target. Each returns a one-line summary or the first failure.
#![allow(dead_code)]
#![allow(clippy::approx_constant)]

use std::collections::{BTreeMap, BTreeSet};

use modlaw::algebra::{
    delta_polynomial_with, lambda_count, lambda_polynomial, merged_coordinate, product_expand, LambdaOptions,
    SplitStrategy,
};
use modlaw::count::{count_aut, count_copies, count_inj};
use modlaw::elimination::limit_probabilities;
use modlaw::enumerate::{all_graphs_on, enumerate_label_connected, k1_code};
use modlaw::experiments::{convergence_experiment, equidist_copies, freq_distribution};
use modlaw::freq::{freq_on_codes, freq_on_patterns};
use modlaw::graph::sample_gnp;
use modlaw::logic::parse;
use modlaw::modular::digits;
use modlaw::polybias::{bias_exact, bias_under, gip, gowers_norm, Measure, PhaseFunction, ZqPolynomial};
use modlaw::rng::seeded;
use modlaw::types::{type_of, PartitionPi, TypeTau};
use modlaw::{CanonicalCode, FreqVector, Graph, LabelledGraph};
use num_bigint::BigInt;
use rand::Rng;

use crate::common::*;

pub type Check<T = String> = Result<T, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check<()> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hosts(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| all_graphs_on(n).unwrap()).collect()
}

fn distinct(w: &[usize]) -> bool {
    w.iter().collect::<BTreeSet<_>>().len() == w.len()
}

fn no_isolated_unlabelled(f: &LabelledGraph) -> bool {
    f.edge_count() > 0 && (f.labels()..f.n()).all(|u| f.mask(u) != 0)
}

/// Backtracking inj against the naive enumerator: patterns with at most four
/// vertices, every host on at most six vertices, every root tuple.
pub fn counting_oracle() -> Check {
    let mut cases = 0u64;
    for k in 0..=2 {
        let patterns = all_patterns(k, 4 - k);
        for g in hosts(6) {
            for w in tuples(g.n(), k) {
                for f in &patterns {
                    let (got, want) = (count_inj(f, &g, &w), naive_inj(f, &g, &w));
                    ensure(got == want, || format!("{f:?} in {:?} at {w:?}: {got} vs {want}", g.edges()))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (pattern, host, roots) triples agree"))
}

/// aut(F) divides [F](G); [F] = aut(F)·#copies; counts at a tuple with
/// repeats equal counts of the quotient pattern at the distinct roots.
pub fn counting_identities() -> Check {
    let mut cases = 0u64;
    for k in 0..=2 {
        let patterns = all_patterns(k, 4 - k);
        for g in hosts(6) {
            for w in tuples(g.n(), k) {
                let pi = PartitionPi::from_tuple(&w);
                let reps: Vec<usize> = (0..pi.block_count()).map(|b| w[pi.representative(b)]).collect();
                for f in &patterns {
                    let inj = count_inj(f, &g, &w);
                    let aut = count_aut(f);
                    ensure(inj.is_multiple_of(aut), || format!("aut {aut} does not divide {inj} for {f:?}"))?;
                    let fq = f.quotient(&pi);
                    ensure(inj == naive_inj(&fq, &g, &reps), || format!("{f:?} at {w:?}: quotient count differs"))?;
                    if no_isolated_unlabelled(&fq) {
                        let copies = naive_copies(&fq, &g, &reps).len() as u128;
                        ensure(inj == count_aut(&fq) * copies, || format!("{f:?} at {w:?}: inj ≠ aut·copies"))?;
                        if distinct(&w) {
                            ensure(count_copies(f, &g, &w) == copies, || format!("{f:?} at {w:?}: copy count"))?;
                        }
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

/// Deterministic stream for instance generation.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self, bound: usize) -> usize {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 33) as usize % bound
    }
}

/// [K2]² on K3, then product and δ identities on 50 random (G, w) each.
pub fn gluing_and_delta() -> Check {
    let k2 = LabelledGraph::new(0, 2, &[(0, 1)]).unwrap();
    let k3 = Graph::complete(3);
    let s = product_expand(&k2, &k2).unwrap();
    let names = BTreeMap::from([(2, "K2"), (3, "P3"), (4, "2K2")]);
    let mut parts: Vec<(usize, String)> = s
        .terms
        .iter()
        .map(|(c, m)| {
            let f = c.decode();
            let v = m * BigInt::from(naive_inj(&f, &k3, &[]));
            (f.n(), format!("{m}[{}] = {v}", names.get(&f.n()).unwrap_or(&"?")))
        })
        .collect();
    parts.sort_by_key(|p| std::cmp::Reverse(p.0));
    let shown: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
    let total = s.evaluate(&k3, &[]);
    ensure(total == BigInt::from(36) && shown.len() == 3, || format!("[K2]² on K3 expands to {shown:?}"))?;
    let mut rng = Lcg(99);
    for i in 0..50u64 {
        let n = 2 + rng.next(6);
        let g = sample_gnp(n, 0.5, i).unwrap();
        let k = rng.next(3);
        let w: Vec<usize> = (0..k).map(|_| rng.next(n)).collect();
        let f1 = random_pattern(k, 1 + rng.next(3), rng.0);
        let f2 = random_pattern(k, 1 + rng.next(2), rng.0 >> 7);
        let want = BigInt::from(naive_inj(&f1, &g, &w)) * BigInt::from(naive_inj(&f2, &g, &w));
        ensure(product_expand(&f1, &f2).unwrap().evaluate(&g, &w) == want, || format!("{f1:?} × {f2:?}"))?;
    }
    let mut rng = Lcg(5);
    for i in 0..50u64 {
        let n = 3 + rng.next(5);
        let g = sample_gnp(n, 0.5, 1000 + i).unwrap();
        let k = rng.next(3);
        let w: Vec<usize> = (0..k).map(|_| rng.next(n)).collect();
        let f = random_pattern(k, 1 + rng.next(4), rng.0 >> 3);
        let t = f.unlabelled_count();
        let value = |c: &CanonicalCode| BigInt::from(naive_inj(&c.decode(), &g, &w));
        let want = BigInt::from(naive_inj(&f, &g, &w));
        for strategy in [SplitStrategy::First, SplitStrategy::Last] {
            let d = delta_polynomial_with(&f, t, strategy).unwrap();
            ensure(d.eval_int(value) == want, || format!("δ of {f:?} at {w:?} ({strategy:?})"))?;
        }
    }
    Ok(format!("[K2]² on K3: {} sum to {total}; 50 products and 50 δ instances exact", shown.join(", ")))
}

/// λ against enumerating v for every graph on ≤ `max_n` vertices, k ≤ 1,
/// b = 1. Returns the number of (G, w, τ′, f′) cases compared.
pub fn lambda_brute_force(max_n: usize) -> Check<usize> {
    let mut cases = 0;
    for q in [2u32, 3] {
        for k in 0..=1usize {
            let pats = enumerate_label_connected(k + 1, 1).unwrap();
            for n in 1..=max_n {
                for g in all_graphs_on(n).unwrap() {
                    for w in tuples(n, k) {
                        let tau = type_of(&g, &w);
                        let mut tally: BTreeMap<(TypeTau, Vec<u32>), u32> = BTreeMap::new();
                        for v in 0..n {
                            let mut wv = w.clone();
                            wv.push(v);
                            let fp = freq_on_patterns(&g, &wv, &pats, 1, q);
                            *tally.entry((type_of(&g, &wv), fp.values())).or_default() += 1;
                        }
                        for tau_p in tau.extensions() {
                            for idx in 0..(q as usize).pow(pats.len() as u32) {
                                let vals = digits(idx, q, pats.len());
                                let fp = FreqVector::from_coords(
                                    q,
                                    k + 1,
                                    1,
                                    pats.iter().map(|p| p.code.clone()).zip(vals.iter().copied()),
                                );
                                let want = tally.get(&(tau_p.clone(), vals.clone())).copied().unwrap_or(0) % q;
                                let mut codes: Vec<CanonicalCode> = vec![k1_code(k)];
                                match tau_p.last_label_merged_into() {
                                    None => {
                                        let nb = tau.block_count();
                                        let adj = tau_p.block_neighbors(nb) & ((1 << nb) - 1);
                                        if let Some(p) = &lambda_polynomial(&tau, adj, &fp, q).unwrap().poly {
                                            codes.extend(p.variables());
                                        }
                                    }
                                    Some(_) => {
                                        codes.extend(pats.iter().map(|p| merged_coordinate(&p.graph, 0).unwrap()));
                                    }
                                }
                                codes.sort();
                                codes.dedup();
                                let f = freq_on_codes(&g, &w, &codes, q);
                                let f = FreqVector::from_coords(q, k, 8, f.iter().map(|(c, r)| (c.clone(), r)));
                                let got =
                                    lambda_count(&tau_p, &fp, &tau, &f, q, 8, 1, LambdaOptions::default()).unwrap();
                                if got != want {
                                    return Err(format!(
                                        "λ = {got}, enumeration gives {want}: q={q} k={k} g={:?} w={w:?} τ′={tau_p:?} f′={vals:?}",
                                        g.edges()
                                    ));
                                }
                                cases += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// ψ against direct evaluation for every suite sentence.
pub fn soundness_gate(n: usize, graphs: u64) -> Check {
    let mut worst: f64 = 0.0;
    for (text, q, _) in SUITE {
        let rate = disagreement_rate(text, q, n, graphs);
        worst = worst.max(rate);
        ensure(rate <= 0.05, || format!("{text}: disagreement on {:.1}% of graphs", rate * 100.0))?;
    }
    Ok(format!("worst disagreement rate {:.1}% over {graphs} graphs of G({n}, 1/2)", worst * 100.0))
}

pub fn triangle_parity(samples: u64, seed: u64) -> Check {
    let k3 = Graph::complete(3);
    let r = equidist_copies(&[k3], 30, 0.5, 2, samples, seed, None).unwrap();
    let odd = r.frequency(&[1]);
    ensure((0.49..=0.51).contains(&odd), || format!("Pr[odd triangles] = {odd:.4}"))?;
    Ok(format!("Pr[odd triangles] = {odd:.4} over {samples} samples of G(30, 1/2)"))
}

pub fn frequency_equidistribution(samples: u64, seed: u64) -> Check {
    let mut shown = Vec::new();
    for p in [0.5, 0.3, 0.7] {
        let r = freq_distribution(30, p, 3, 3, samples, seed, Some(0.03)).unwrap();
        ensure(r.reference_size == 9, || format!("feasible set has {} members", r.reference_size))?;
        ensure(r.distance < 0.03, || format!("p = {p}: distance {:.4}", r.distance))?;
        shown.push(format!("p={p}: {:.4}", r.distance));
    }
    Ok(format!("distance to uniform on 9 feasible vectors: {}", shown.join(", ")))
}

pub fn convergence(samples: u64, seed: u64) -> Check {
    let mut worst: f64 = 0.0;
    for (i, (text, q, want)) in SUITE.iter().enumerate() {
        let phi = parse(text).unwrap();
        let profile = limit_probabilities(&phi, *q, None).unwrap();
        let got: Vec<(u128, u32)> = profile.a.iter().map(|a| (a.numerator, a.exponent)).collect();
        ensure(got == want.to_vec(), || format!("{text}: profile {got:?}"))?;
        if i < 4 {
            let bits: Vec<f64> = profile.values();
            ensure(bits.iter().all(|&v| v == 0.0 || v == 1.0), || format!("{text}: {bits:?}"))?;
        }
        let r = convergence_experiment(&phi, *q, 0.5, &[20, 21, 22, 23, 24, 25], samples, seed, None).unwrap();
        for row in &r.rows {
            let z = if row.sigma > 0.0 {
                row.diff / row.sigma
            } else if row.diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(z);
            ensure(row.within_3_sigma, || {
                format!(
                    "{text} at n={}: empirical {:.4}, limit {:.4}, σ {:.4}",
                    row.n, row.empirical, row.limit, row.sigma
                )
            })?;
        }
    }
    Ok(format!("8 sentences × n=20..25 within 3σ (largest deviation {worst:.2}σ); profiles exact"))
}

fn random_measure(rng: &mut impl Rng, q: u32, m: usize) -> Measure {
    let w: Vec<f64> = (0..(q as usize).pow(m as u32)).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    Measure::table(q, m, w.iter().map(|x| x / total).collect()).unwrap()
}

fn random_phase(rng: &mut impl Rng, q: u32, m: usize) -> PhaseFunction {
    PhaseFunction::from_table(q, m, (0..(q as usize).pow(m as u32)).map(|_| rng.gen_range(0..q)).collect()).unwrap()
}

/// A random multilinear polynomial of degree exactly `deg` (or 0 when deg = 0).
pub fn random_poly(rng: &mut impl Rng, q: u32, m: usize, deg: usize) -> ZqPolynomial {
    let mut h = ZqPolynomial::zero(q, m).unwrap();
    let top: Vec<usize> = (0..deg).collect();
    h.add_term(&top, rng.gen_range(1..q));
    for _ in 0..3 {
        let size = rng.gen_range(0..=deg);
        let mut vars: Vec<usize> = (0..m).collect();
        for i in 0..size {
            let j = rng.gen_range(i..m);
            vars.swap(i, j);
        }
        h.add_term(&vars[..size], rng.gen_range(0..q));
    }
    h
}

fn norm(f: &PhaseFunction, mu: &Measure, d: usize) -> f64 {
    gowers_norm(f, mu, d, 0, 0).unwrap().value
}

/// Monotonicity, the bias bound, tensor multiplicativity and phase invariance
/// on random exact-mode instances (q ∈ {2, 3}, m ≤ 3, d ≤ 2).
pub fn gowers_universe(seed: u64) -> Check<f64> {
    let mut rng = seeded(seed);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let q = [2, 3][case % 2];
        let m = 1 + case % 3;
        let f = random_phase(&mut rng, q, m);
        let mu = random_measure(&mut rng, q, m);
        let bias = bias_under(&f, &mu).unwrap();
        for d in 0..=2 {
            let (lo, hi) = (norm(&f, &mu, d), norm(&f, &mu, d + 1));
            worst = worst.max(lo - hi).max(bias - lo);
            ensure(lo <= hi + 1e-9, || format!("case {case}: U^{d} = {lo} > U^{} = {hi}", d + 1))?;
            ensure(bias <= lo + 1e-9, || format!("case {case}: bias {bias} > U^{d} = {lo}"))?;
        }
        for d in 1..=2 {
            let h = random_poly(&mut rng, q, m, (d - 1).min(m));
            let (a, b) = (norm(&f, &mu, d), norm(&f.times_phase(&h).unwrap(), &mu, d));
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() <= 1e-9, || format!("case {case}: phase {h} moves U^{d} from {a} to {b}"))?;
        }
        let (m1, m2) = (1 + case % 2, 1);
        let (g1, g2) = (random_phase(&mut rng, q, m1), random_phase(&mut rng, q, m2));
        let (mu1, mu2) = (random_measure(&mut rng, q, m1), random_measure(&mut rng, q, m2));
        let (g, mu12) = (g1.tensor(&g2).unwrap(), mu1.tensor(&mu2).unwrap());
        for d in 0..=2 {
            let (whole, parts) = (norm(&g, &mu12, d), norm(&g1, &mu1, d) * norm(&g2, &mu2, d));
            worst = worst.max((whole - parts).abs());
            ensure((whole - parts).abs() <= 1e-9, || format!("case {case}: tensor U^{d} {whole} vs {parts}"))?;
        }
    }
    Ok(worst)
}

/// ‖(−1)^{x₁x₂}‖ under the uniform measure at d = 2.
pub fn inner_product_norm() -> f64 {
    let mut p = ZqPolynomial::zero(2, 2).unwrap();
    p.add_term(&[0, 1], 1);
    norm(&PhaseFunction::from_poly(&p), &Measure::uniform(2, 2), 2)
}

/// Largest |bias(gip(r, 2)) − 2^{−r}| at p = 1/2 for r ≤ 10.
pub fn gip_half_error() -> f64 {
    (1..=10)
        .map(|r| {
            let b = bias_exact(&gip(r, 2, &vec![1; r], 2).unwrap(), 0.5).unwrap();
            (b - 0.5f64.powi(r as i32)).abs()
        })
        .fold(0.0, f64::max)
}

pub fn gowers_suite() -> Check {
    let worst = gowers_universe(7)?;
    let ip = inner_product_norm();
    ensure((ip - 0.70711).abs() <= 1e-5, || format!("‖(−1)^(x1x2)‖_U2 = {ip}"))?;
    let gip_err = gip_half_error();
    ensure(gip_err <= 1e-12, || format!("GIP bias off 2^-r by {gip_err:e}"))?;
    Ok(format!("largest violation {worst:.1e}; ‖(−1)^(x1x2)‖_U2 = {ip:.6}; GIP bias within {gip_err:.1e} of 2^-r"))
}
