use serde::Serialize;

use super::psi::build_psi;
use crate::canon::CanonicalCode;
use crate::count::for_each_inj;
use crate::enumerate::{enumerate_label_connected, Pattern};
use crate::error::{Error, Result};
use crate::freq::{classify, Coord, FreqVector};
use crate::graph::Graph;
use crate::logic::Formula;
use crate::modular::{digits, interpolate};
use crate::polybias::ZqPolynomial;
use crate::types::TypeTau;

pub const DEFAULT_TERM_CAP: usize = 1 << 20;

/// A polynomial in the edge indicators of graphs on n vertices; variable
/// `i` is the pair `edges[i]`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgePolynomial {
    #[serde(serialize_with = "display")]
    pub poly: ZqPolynomial,
    pub edges: Vec<(usize, usize)>,
    pub degree: usize,
    /// (q−1)·c·|Conn^c| for the c that ψ reads.
    pub degree_bound: usize,
}

fn display<S: serde::Serializer>(p: &ZqPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl EdgePolynomial {
    pub fn eval_graph(&self, g: &Graph) -> u32 {
        let x: Vec<u32> = self.edges.iter().map(|&(u, v)| u32::from(g.adj(u, v))).collect();
        self.poly.eval(&x)
    }
}

/// [F](G) mod q as a polynomial in the edge indicators of G on n vertices.
fn count_polynomial(
    code: &CanonicalCode,
    n: usize,
    q: u32,
    index: &dyn Fn(usize, usize) -> usize,
) -> Result<ZqPolynomial> {
    let f = code.decode();
    let mut out = ZqPolynomial::zero(q, n * n.saturating_sub(1) / 2)?;
    let edges = f.edges();
    for_each_inj(&f, &Graph::complete(n), &[], |image| {
        let vars: Vec<usize> = edges.iter().map(|&(a, b)| index(image[a], image[b])).collect();
        out.add_term(&vars, 1);
    });
    Ok(out)
}

/// P with P(A_G) = ψ(freq_G) for every graph G on n vertices, ψ the
/// eliminated form of the sentence.
pub fn formula_to_polynomial(
    phi: &Formula,
    q: u32,
    n: usize,
    c_cap: Option<usize>,
    term_cap: usize,
) -> Result<EdgePolynomial> {
    if n > 64 {
        return Err(Error::ScaleExceeded(format!("{n} vertices give too many edge variables")));
    }
    let psi = build_psi(phi, q, c_cap)?;
    let tau = TypeTau::empty();
    let reads = psi.reads(&tau)?;
    let c = psi.size_bound(&tau)?;
    let patterns: Vec<Pattern> = reads.iter().cloned().map(Pattern::from_code).collect();
    let (rules, classes) = classify(&patterns, &tau, q, (n % q as usize) as u32)?;
    let size = (q as usize)
        .checked_pow(classes as u32)
        .filter(|&s| s <= 1 << 20)
        .ok_or_else(|| Error::ScaleExceeded(format!("ψ reads {classes} free classes")))?;
    let mut table = vec![0u32; size];
    for (idx, slot) in table.iter_mut().enumerate() {
        let vals = digits(idx, q, classes);
        let mut f = FreqVector::new(q, 0, c);
        for (p, rule) in patterns.iter().zip(&rules) {
            let v = match *rule {
                Coord::Fixed(x) => x,
                Coord::Free(i) => vals[i],
            };
            f.set(p.code.clone(), v);
        }
        *slot = u32::from(psi.eval(&tau, &f)?);
    }
    let mut reps = vec![None; classes];
    for (p, rule) in patterns.iter().zip(&rules) {
        if let Coord::Free(i) = *rule {
            reps[i].get_or_insert_with(|| p.code.clone());
        }
    }
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |a: usize, b: usize| {
        let (u, v) = (a.min(b), a.max(b));
        u * (2 * n - u - 1) / 2 + (v - u - 1)
    };
    let m = edges.len();
    let counts = reps
        .iter()
        .map(|r| count_polynomial(r.as_ref().expect("class member"), n, q, &index))
        .collect::<Result<Vec<_>>>()?;
    let mut poly = ZqPolynomial::zero(q, m)?;
    for (idx, &coef) in interpolate(q, classes, &table).iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let mut term = ZqPolynomial::constant(q, m, coef)?;
        for (class, e) in digits(idx, q, classes).into_iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&counts[class], term_cap)?;
            }
        }
        poly = poly.add(&term);
        if poly.term_count() > term_cap {
            return Err(Error::ScaleExceeded(format!("polynomial exceeds {term_cap} terms")));
        }
    }
    let conn = if c == 0 { 0 } else { enumerate_label_connected(0, c)?.len() };
    Ok(EdgePolynomial { degree: poly.degree(), poly, edges, degree_bound: (q as usize - 1) * c * conn })
}
