use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Sparse multilinear polynomial over Z_q in variables Z_1..Z_m (stored
/// 0-based). Monomials are sorted variable-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZqPolynomial {
    q: u32,
    m: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl ZqPolynomial {
    pub fn zero(q: u32, m: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {q}")));
        }
        Ok(ZqPolynomial { q, m, terms: BTreeMap::new() })
    }

    pub fn constant(q: u32, m: usize, c: u32) -> Result<Self> {
        let mut p = Self::zero(q, m)?;
        p.add_term(&[], c);
        Ok(p)
    }

    pub fn var(q: u32, m: usize, i: usize) -> Result<Self> {
        let mut p = Self::zero(q, m)?;
        p.add_term(&[i], 1);
        Ok(p)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn var_count(&self) -> usize {
        self.m
    }

    /// Adds `c · Π_{i ∈ vars} Z_i`; repeated indices collapse (Z² = Z on bits).
    pub fn add_term(&mut self, vars: &[usize], c: u32) {
        let mut mono: Vec<u32> = vars
            .iter()
            .map(|&i| {
                assert!(i < self.m, "variable index {i} out of range");
                i as u32
            })
            .collect();
        mono.sort_unstable();
        mono.dedup();
        let q = self.q;
        let slot = self.terms.entry(mono.clone()).or_insert(0);
        *slot = (*slot + c % q) % q;
        if *slot == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &ZqPolynomial) {
        assert!(self.q == other.q && self.m == other.m, "polynomials over different rings");
    }

    pub fn add(&self, other: &ZqPolynomial) -> ZqPolynomial {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let vars: Vec<usize> = m.iter().map(|&i| i as usize).collect();
            out.add_term(&vars, c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> ZqPolynomial {
        let mut out = ZqPolynomial { q: self.q, m: self.m, terms: BTreeMap::new() };
        for (m, &d) in &self.terms {
            let v = (d as u64 * c as u64 % self.q as u64) as u32;
            if v != 0 {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Product with Z_i² reduced to Z_i; fails once the result would hold
    /// more than `term_cap` terms.
    pub fn mul(&self, other: &ZqPolynomial, term_cap: usize) -> Result<ZqPolynomial> {
        self.check_compatible(other);
        let mut out = ZqPolynomial { q: self.q, m: self.m, terms: BTreeMap::new() };
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let mut vars: Vec<usize> = m1.iter().chain(m2).map(|&i| i as usize).collect();
                vars.sort_unstable();
                out.add_term(&vars, (c1 as u64 * c2 as u64 % self.q as u64) as u32);
                if out.terms.len() > term_cap {
                    return Err(Error::ScaleExceeded(format!("polynomial product exceeds {term_cap} terms")));
                }
            }
        }
        Ok(out)
    }

    /// Value at a point of Z_q^m, each monomial read as Π x_i.
    pub fn eval(&self, x: &[u32]) -> u32 {
        assert_eq!(x.len(), self.m);
        let q = self.q as u64;
        let mut total = 0u64;
        for (m, &c) in &self.terms {
            let mut t = c as u64;
            for &i in m {
                t = t * x[i as usize] as u64 % q;
                if t == 0 {
                    break;
                }
            }
            total += t;
        }
        (total % q) as u32
    }

    /// Value at a 0/1 point given as a bit mask (m ≤ 64).
    pub fn eval_bits(&self, mask: u64) -> u32 {
        let mut total = 0u64;
        for (m, &c) in &self.terms {
            if m.iter().all(|&i| mask >> i & 1 == 1) {
                total += c as u64;
            }
        }
        (total % self.q as u64) as u32
    }

    /// Terms as (variable mask, coefficient) pairs, for m ≤ 64.
    pub(crate) fn mask_terms(&self) -> Vec<(u64, u32)> {
        assert!(self.m <= 64);
        self.terms.iter().map(|(m, &c)| (m.iter().fold(0u64, |acc, &i| acc | 1 << i), c)).collect()
    }
}

impl fmt::Display for ZqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let vars: Vec<String> = m.iter().map(|i| format!("Z{}", i + 1)).collect();
                match (vars.is_empty(), c) {
                    (true, _) => c.to_string(),
                    (false, 1) => vars.join("*"),
                    (false, _) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.q)
    }
}

impl ZqPolynomial {
    /// Reads the display syntax, e.g. `Z1*Z2 + 2*Z3 + 1`, with an optional
    /// trailing `(mod q)` that must agree with `q`.
    pub fn parse(text: &str, q: u32, m: usize) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("polynomial `{text}`: {msg}"));
        let mut body = text.trim();
        if let Some(open) = body.rfind("(mod") {
            let tail = body[open + 4..].trim().trim_end_matches(')').trim();
            let declared: u32 = tail.parse().map_err(|_| bad(format!("bad modulus `{tail}`")))?;
            if declared != q {
                return Err(bad(format!("declares modulus {declared}, expected {q}")));
            }
            body = body[..open].trim();
        }
        let mut p = Self::zero(q, m)?;
        if body == "0" {
            return Ok(p);
        }
        for term in body.split('+') {
            let mut c = 1u32;
            let mut vars = Vec::new();
            for factor in term.split('*').map(str::trim) {
                if let Some(idx) = factor.strip_prefix('Z').or_else(|| factor.strip_prefix('z')) {
                    let i: usize = idx.parse().map_err(|_| bad(format!("bad variable `{factor}`")))?;
                    if i == 0 || i > m {
                        return Err(bad(format!("variable Z{i} outside Z1..Z{m}")));
                    }
                    vars.push(i - 1);
                } else {
                    let v: u32 = factor.parse().map_err(|_| bad(format!("bad factor `{factor}`")))?;
                    c = ((c as u64 * v as u64) % q as u64) as u32;
                }
            }
            p.add_term(&vars, c);
        }
        Ok(p)
    }
}

/// Σ_{j=1}^r a_j Π_{i ∈ E_j} Z_i over consecutive blocks E_j of size d.
pub fn gip(r: usize, d: usize, coeffs: &[u32], q: u32) -> Result<ZqPolynomial> {
    if coeffs.len() != r {
        return Err(Error::InvalidArgument(format!("need {r} coefficients, got {}", coeffs.len())));
    }
    if let Some(j) = coeffs.iter().position(|&a| a % q == 0) {
        return Err(Error::InvalidArgument(format!("coefficient a_{} is zero mod {q}", j + 1)));
    }
    let mut p = ZqPolynomial::zero(q, r * d)?;
    for (j, &a) in coeffs.iter().enumerate() {
        let block: Vec<usize> = (j * d..(j + 1) * d).collect();
        p.add_term(&block, a);
    }
    Ok(p)
}
