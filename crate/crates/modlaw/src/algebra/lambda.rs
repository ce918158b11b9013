use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use super::delta::delta_of_sum;
use super::extend::merged_coordinate;
use super::glue::FormalSum;
use super::poly::{FreqPolynomial, Monomial};
use crate::canon::canonical_form;
use crate::enumerate::{enumerate_label_connected, k1_code};
use crate::error::{Error, Result};
use crate::freq::{classify, Coord, FreqVector};
use crate::modular::{i64_mod, interpolate, require_prime};
use crate::pattern::{iter_mask, LabelledGraph};
use crate::types::TypeTau;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LambdaOptions {
    /// Accept a size bound `a` below `(q−1)·b·|Conn_{k+1}^b|`.
    pub allow_small_a: bool,
}

type ExpansionCache = RwLock<HashMap<(usize, Monomial), Arc<FormalSum>>>;

/// Σ_η expansion of a product of (k+1)-labelled patterns, starting from the
/// labels-only pattern.
fn expand_monomial(k1: usize, m: &Monomial) -> Result<Arc<FormalSum>> {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (k1, m.clone());
    if let Some(hit) = cache.read().expect("expansion cache").get(&key) {
        return Ok(hit.clone());
    }
    let mut sum = FormalSum::single(canonical_form(&LabelledGraph::labels_only(k1))?);
    for code in m.factors() {
        sum = sum.times(&code.decode())?;
    }
    let sum = Arc::new(sum);
    cache.write().expect("expansion cache").insert(key, sum.clone());
    Ok(sum)
}

/// Σ over vertices v ∉ w of type τ + (new block adjacent to `adjacency`) of
/// `p(freq(w, v))`, as a polynomial in the k-level indeterminates, mod q.
///
/// The type indicator Π_{B∈I} x_{vB} Π_{B∉I} (1 − x_{vB}) is expanded as
/// Σ_{S⊇I} (−1)^{|S∖I|} Π_{B∈S} x_{vB}; each pattern F_j of the expanded
/// product gets edges from the new label to the representatives of S and the
/// new label is then unlabelled, giving F′_{S,j}.
pub fn extension_sum(tau: &TypeTau, adjacency: u32, p: &FreqPolynomial, q: u32) -> Result<FreqPolynomial> {
    let k = tau.arity();
    let nb = tau.block_count();
    let all = crate::pattern::full_mask(nb);
    assert_eq!(adjacency & !all, 0, "adjacency must name blocks of τ");
    let reps: Vec<usize> = (0..nb).map(|b| tau.partition().representative(b)).collect();
    let rest = all & !adjacency;
    let mut total = FormalSum::default();
    for (m, coef) in p.terms() {
        let expansion = expand_monomial(k + 1, m)?;
        let mut extra = rest;
        loop {
            let s = adjacency | extra;
            let sign: i64 = if extra.count_ones().is_multiple_of(2) { 1 } else { -1 };
            let to_labels = iter_mask(s).fold(0u32, |acc, b| acc | 1 << reps[b]);
            for (fj, cj) in &expansion.terms {
                let fprime = fj.decode().unlabel_last(to_labels);
                total.add_term(canonical_form(&fprime)?, coef * cj * BigInt::from(sign));
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & rest;
        }
    }
    let reduced = FormalSum {
        terms: total
            .terms
            .into_iter()
            .map(|(c, v)| (c, BigInt::from(crate::modular::big_mod(&v, q))))
            .filter(|(_, v)| v != &BigInt::from(0))
            .collect(),
    };
    Ok(delta_of_sum(&reduced)?.reduce_mod(q))
}

/// Univariate indicator `1 − (x − c)^{q−1}` as coefficients of x^0..x^{q−1}.
fn point_indicator(q: u32, c: u32) -> Vec<u32> {
    let table: Vec<u32> = (0..q).map(|x| u32::from(x == c)).collect();
    interpolate(q, 1, &table)
}

/// The singleton-case λ as a function of f: either identically zero, or
/// `[f_{K₁(k)} = k1_value] · poly(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPolynomial {
    pub k1_value: u32,
    pub poly: Option<FreqPolynomial>,
}

type LambdaKey = (TypeTau, u32, Vec<(crate::canon::CanonicalCode, u32)>, u32);

/// Builds λ(τ′, f′, τ, ·) for τ′ = τ plus a new block adjacent to `adjacency`.
pub fn lambda_polynomial(tau: &TypeTau, adjacency: u32, f_p: &FreqVector, q: u32) -> Result<Arc<LambdaPolynomial>> {
    static CACHE: OnceLock<RwLock<HashMap<LambdaKey, Arc<LambdaPolynomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key: LambdaKey = (tau.clone(), adjacency, f_p.iter().map(|(c, r)| (c.clone(), r)).collect(), q);
    if let Some(hit) = cache.read().expect("lambda cache").get(&key) {
        return Ok(hit.clone());
    }
    let k = tau.arity();
    let b = f_p.size_bound();
    let tau_p = tau.extend_singleton(adjacency);
    let patterns = enumerate_label_connected(k + 1, b)?;
    let k1p = k1_code(k + 1);
    let k1_value = i64_mod(f_p.require(&k1p)? as i64 + 1, q);
    let (rules, free) = classify(&patterns, &tau_p, q, 0)?;
    let mut class_value: Vec<Option<u32>> = vec![None; free];
    let mut rep_code = vec![None; free];
    let mut feasible = true;
    for (p, rule) in patterns.iter().zip(&rules) {
        if p.code == k1p {
            continue;
        }
        let v = f_p.require(&p.code)?;
        match *rule {
            Coord::Fixed(x) => feasible &= v == x,
            Coord::Free(i) => match class_value[i] {
                Some(x) => feasible &= v == x,
                None => {
                    class_value[i] = Some(v);
                    rep_code[i] = Some(p.code.clone());
                }
            },
        }
    }
    let poly = if feasible {
        let mut prod = FreqPolynomial::one();
        for (code, v) in rep_code.into_iter().zip(class_value) {
            let (code, v) = (code.expect("class has a member"), v.expect("class has a value"));
            let coeffs = point_indicator(q, v);
            let mut factor = FreqPolynomial::zero();
            for (e, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    let m = if e == 0 { Monomial::one() } else { Monomial(vec![(code.clone(), e as u32)]) };
                    factor.add_term(m, BigInt::from(c));
                }
            }
            prod = prod.mul(&factor).reduce_mod(q);
        }
        Some(extension_sum(tau, adjacency, &prod, q)?)
    } else {
        None
    };
    let out = Arc::new(LambdaPolynomial { k1_value, poly });
    cache.write().expect("lambda cache").insert(key, out.clone());
    Ok(out)
}

/// λ(τ′, f′, τ, f) mod q: the number of vertices v ∉ w with type(w, v) = τ′
/// and freq_b(w, v) = f′, as a function of (τ, f) alone.
#[allow(clippy::too_many_arguments)]
pub fn lambda_count(
    tau_p: &TypeTau,
    f_p: &FreqVector,
    tau: &TypeTau,
    f: &FreqVector,
    q: u32,
    a: usize,
    b: usize,
    opts: LambdaOptions,
) -> Result<u32> {
    require_prime(q)?;
    if f_p.size_bound() != b || f.size_bound() < a {
        return Err(Error::InvalidArgument("size bounds disagree with the frequency vectors".into()));
    }
    if !tau_p.extends(tau) {
        return Ok(0);
    }
    let k = tau.arity();
    if let Some(block) = tau_p.last_label_merged_into() {
        let j = tau_p.partition().representative(block);
        for p in enumerate_label_connected(k + 1, b)?.iter() {
            if f_p.require(&p.code)? != f.require(&merged_coordinate(&p.graph, j)?)? {
                return Ok(0);
            }
        }
        return Ok(1);
    }
    let conn = enumerate_label_connected(k + 1, b)?.len();
    let needed = (q as usize - 1) * b * conn;
    if a < needed && !opts.allow_small_a {
        return Err(Error::InvalidArgument(format!(
            "size bound a={a} is below (q-1)·b·|Conn_(k+1)^b| = {needed}; set allow_small_a to override"
        )));
    }
    let nb = tau.block_count();
    let adjacency = tau_p.block_neighbors(nb) & crate::pattern::full_mask(nb);
    let lp = lambda_polynomial(tau, adjacency, f_p, q)?;
    if f.require(&k1_code(k))? != lp.k1_value {
        return Ok(0);
    }
    match &lp.poly {
        None => Ok(0),
        Some(poly) => poly.eval_mod(q, |c| f.require(c)),
    }
}
