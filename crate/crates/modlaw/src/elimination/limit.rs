use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::psi::{build_psi, PsiFunction};
use crate::enumerate::{enumerate_label_connected, Pattern};
use crate::error::{Error, Result};
use crate::freq::{classify, Coord, FreqVector, FEASIBLE_ENUMERATION_CAP};
use crate::logic::Formula;
use crate::modular::digits;
use crate::types::TypeTau;

/// An exact probability `r / q^s` with `s` as small as possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QAdic {
    pub numerator: u128,
    pub q: u32,
    pub exponent: u32,
}

impl QAdic {
    pub fn new(mut numerator: u128, q: u32, mut exponent: u32) -> QAdic {
        while exponent > 0 && numerator.is_multiple_of(q as u128) {
            numerator /= q as u128;
            exponent -= 1;
        }
        QAdic { numerator, q, exponent }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.q as f64).powi(self.exponent as i32)
    }
}

impl fmt::Display for QAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.q, self.exponent)
    }
}

impl Serialize for QAdic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Limit probabilities a₀,…,a_{q−1} of a sentence, with diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct LimitProfile {
    pub q: u32,
    pub a: Vec<QAdic>,
    /// Largest unlabelled size of a pattern whose frequency ψ reads.
    pub c_used: usize,
    /// |FFreq_i(∅, ∅, c_used)| per residue i, when Conn^{c_used} is enumerable.
    pub feasible_set_sizes: Vec<Option<u128>>,
    /// Number of distinct feasible assignments to the coordinates ψ reads,
    /// per residue; these are what is enumerated.
    pub read_set_sizes: Vec<u128>,
    /// Codes of the patterns ψ reads, hex encoded.
    pub read_set: Vec<String>,
}

impl LimitProfile {
    pub fn values(&self) -> Vec<f64> {
        self.a.iter().map(QAdic::to_f64).collect()
    }

    /// The limit along `n ≡ residue (mod q)`.
    pub fn for_n(&self, n: usize) -> f64 {
        self.a[n % self.q as usize].to_f64()
    }
}

/// a_i = Pr[ψ(f) = 1] for f uniform on the feasible vectors with f_{K₁} = i.
///
/// The feasible set is a product over free coordinate classes, so ψ's law
/// is computed exactly on the projection to the coordinates it reads.
pub fn limit_probabilities(phi: &Formula, q: u32, c_cap: Option<usize>) -> Result<LimitProfile> {
    let psi = build_psi(phi, q, c_cap)?;
    limit_of(&psi)
}

pub fn limit_of(psi: &PsiFunction) -> Result<LimitProfile> {
    if psi.arity() != 0 {
        return Err(Error::InvalidArgument("limit probabilities need a sentence".into()));
    }
    let q = psi.q();
    let tau = TypeTau::empty();
    let reads = psi.reads(&tau)?;
    let patterns: Vec<Pattern> = reads.iter().cloned().map(Pattern::from_code).collect();
    let c_used = psi.size_bound(&tau)?;
    let mut a = Vec::new();
    let mut read_set_sizes = Vec::new();
    for i in 0..q {
        let (rules, classes) = classify(&patterns, &tau, q, i)?;
        let size = (q as u128).checked_pow(classes as u32).unwrap_or(u128::MAX);
        if size > FEASIBLE_ENUMERATION_CAP {
            return Err(Error::ScaleExceeded(format!(
                "ψ reads {classes} free frequency classes; {size} vectors exceed the enumeration cap"
            )));
        }
        let hits = (0..size as usize)
            .into_par_iter()
            .map(|idx| {
                let vals = digits(idx, q, classes);
                let mut f = FreqVector::new(q, 0, c_used);
                for (p, rule) in patterns.iter().zip(&rules) {
                    let v = match *rule {
                        Coord::Fixed(x) => x,
                        Coord::Free(c) => vals[c],
                    };
                    f.set(p.code.clone(), v);
                }
                psi.eval(&tau, &f).map(u128::from)
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))?;
        a.push(QAdic::new(hits, q, classes as u32));
        read_set_sizes.push(size);
    }
    let feasible_set_sizes = (0..q)
        .map(|i| {
            if c_used > 7 {
                return Ok(None);
            }
            let all = enumerate_label_connected(0, c_used)?;
            let (_, classes) = classify(&all, &tau, q, i)?;
            Ok((q as u128).checked_pow(classes as u32))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitProfile {
        q,
        a,
        c_used,
        feasible_set_sizes,
        read_set_sizes,
        read_set: reads.iter().map(|c| c.to_hex()).collect(),
    })
}
