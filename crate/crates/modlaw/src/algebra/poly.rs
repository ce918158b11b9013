use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::canon::CanonicalCode;
use crate::error::Result;
use crate::modular::{big_mod, pow_mod};

/// Product of indeterminates `X_F^e`, sorted by code, every exponent ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<(CanonicalCode, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(code: CanonicalCode) -> Self {
        Monomial(vec![(code, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<CanonicalCode, u32> = self.0.iter().cloned().collect();
        for (c, e) in &other.0 {
            *map.entry(c.clone()).or_default() += e;
        }
        Monomial(map.into_iter().collect())
    }

    /// The factors with multiplicity, in code order.
    pub fn factors(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.0.iter().flat_map(|(c, e)| std::iter::repeat_n(c, *e as usize))
    }
}

/// Integer polynomial in the indeterminates X_F, F a label-connected pattern.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreqPolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl FreqPolynomial {
    pub fn zero() -> Self {
        FreqPolynomial::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = FreqPolynomial::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn one() -> Self {
        FreqPolynomial::constant(1)
    }

    pub fn var(code: CanonicalCode) -> Self {
        let mut p = FreqPolynomial::zero();
        p.add_term(Monomial::var(code), BigInt::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<CanonicalCode> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(c, _)| c.clone())).collect()
    }

    pub fn add(&self, other: &FreqPolynomial) -> FreqPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigInt::one());
        out
    }

    pub fn sub(&self, other: &FreqPolynomial) -> FreqPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-BigInt::one());
        out
    }

    /// `self += c · other`.
    pub fn add_assign_scaled(&mut self, other: &FreqPolynomial, c: &BigInt) {
        for (m, d) in &other.terms {
            self.add_term(m.clone(), c * d);
        }
    }

    pub fn mul(&self, other: &FreqPolynomial) -> FreqPolynomial {
        let mut out = FreqPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Coefficients reduced into `0..q`, zero terms dropped.
    pub fn reduce_mod(&self, q: u32) -> FreqPolynomial {
        let mut out = FreqPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), BigInt::from(big_mod(c, q)));
        }
        out
    }

    /// Exact value at `x_F = value(F)`.
    pub fn eval_int(&self, mut value: impl FnMut(&CanonicalCode) -> BigInt) -> BigInt {
        let mut cache: BTreeMap<CanonicalCode, BigInt> = BTreeMap::new();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (code, e) in &m.0 {
                let v = cache.entry(code.clone()).or_insert_with(|| value(code)).clone();
                t *= num_traits::pow(v, *e as usize);
            }
            total += t;
        }
        total
    }

    /// Value mod q at `x_F = value(F)`.
    pub fn eval_mod(&self, q: u32, mut value: impl FnMut(&CanonicalCode) -> Result<u32>) -> Result<u32> {
        let qq = q as u64;
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut t = big_mod(c, q) as u64;
            for (code, e) in &m.0 {
                if t == 0 {
                    break;
                }
                t = t * pow_mod(value(code)? as u64, *e as u64, qq) % qq;
            }
            total = (total + t) % qq;
        }
        Ok(total as u32)
    }
}

/// Short human-readable name of a pattern: labels, vertex count and edges.
pub fn describe_code(code: &CanonicalCode) -> String {
    let g = code.decode();
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("[k={} n={} {}]", g.labels(), g.n(), edges.join(","))
}

impl fmt::Display for FreqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            let vars: Vec<String> =
                m.0.iter()
                    .map(|(code, e)| {
                        if *e == 1 {
                            format!("X{}", describe_code(code))
                        } else {
                            format!("X{}^{e}", describe_code(code))
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
