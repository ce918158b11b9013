//! Frequency vectors mod q and feasible sets.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::canon::{canonical_form, CanonicalCode};
use crate::count::{count_aut, count_inj};
use crate::enumerate::{enumerate_label_connected, k1_code, Pattern};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modular::require_prime;
use crate::types::{type_of, TypeTau};

pub const FEASIBLE_ENUMERATION_CAP: u128 = 1_000_000;

/// Residues `[F]_q(G, w)` indexed by pattern code, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreqVector {
    q: u32,
    arity: usize,
    size_bound: usize,
    coords: IndexMap<CanonicalCode, u32>,
}

impl FreqVector {
    pub fn new(q: u32, arity: usize, size_bound: usize) -> Self {
        FreqVector { q, arity, size_bound, coords: IndexMap::new() }
    }

    pub fn from_coords(
        q: u32,
        arity: usize,
        size_bound: usize,
        coords: impl IntoIterator<Item = (CanonicalCode, u32)>,
    ) -> Self {
        let mut f = FreqVector::new(q, arity, size_bound);
        for (c, r) in coords {
            f.set(c, r);
        }
        f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn get(&self, code: &CanonicalCode) -> Option<u32> {
        self.coords.get(code).copied()
    }

    pub fn require(&self, code: &CanonicalCode) -> Result<u32> {
        self.get(code).ok_or_else(|| Error::MissingCoordinate(code.to_hex()))
    }

    pub fn set(&mut self, code: CanonicalCode, r: u32) {
        assert_eq!(code.labels(), self.arity, "coordinate arity mismatch");
        self.coords.insert(code, r % self.q);
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalCode, u32)> {
        self.coords.iter().map(|(c, &r)| (c, r))
    }

    pub fn values(&self) -> Vec<u32> {
        self.coords.values().copied().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("frequency vectors serialize")
    }
}

impl Serialize for FreqVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coords<'a>(&'a IndexMap<CanonicalCode, u32>);
        impl Serialize for Coords<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (c, r) in self.0 {
                    m.serialize_entry(&c.to_hex(), r)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("q", &self.q)?;
        m.serialize_entry("root_arity", &self.arity)?;
        m.serialize_entry("size_bound", &self.size_bound)?;
        m.serialize_entry("coords", &Coords(&self.coords))?;
        m.end()
    }
}

/// freq_G^a(w) over Conn_k^a, asserting membership in the feasible set.
pub fn freq_vector(g: &Graph, w: &[usize], a: usize, q: u32) -> Result<FreqVector> {
    require_prime(q)?;
    let patterns = enumerate_label_connected(w.len(), a)?;
    let f = freq_on_patterns(g, w, &patterns, a, q);
    let fs = enumerate_feasible(&type_of(g, w), w.len(), a, q, (g.n() % q as usize) as u32)?;
    assert!(fs.contains(&f), "frequency vector of a concrete graph must be feasible");
    Ok(f)
}

pub fn freq_on_patterns(g: &Graph, w: &[usize], patterns: &[Pattern], a: usize, q: u32) -> FreqVector {
    let coords = patterns.iter().map(|p| (p.code.clone(), (count_inj(&p.graph, g, w) % q as u128) as u32));
    FreqVector::from_coords(q, w.len(), a, coords)
}

/// Residues for an explicit list of codes (used when only a few coordinates are read).
pub fn freq_on_codes(g: &Graph, w: &[usize], codes: &[CanonicalCode], q: u32) -> FreqVector {
    let a = codes.iter().map(|c| c.unlabelled_count()).max().unwrap_or(0);
    let coords = codes.iter().map(|c| (c.clone(), (count_inj(&c.decode(), g, w) % q as u128) as u32));
    FreqVector::from_coords(q, w.len(), a, coords)
}

/// How one coordinate of a feasible vector is determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    /// Forced to this residue.
    Fixed(u32),
    /// Equal to free class `i`.
    Free(usize),
}

/// Classifies the coordinates of Conn_k^a patterns under `tau`: K₁ is
/// pinned, coordinates with q | aut(F/Π) are zero, and Π-equivalent patterns
/// share one free class.
pub fn classify(patterns: &[Pattern], tau: &TypeTau, q: u32, n_residue: u32) -> Result<(Vec<Coord>, usize)> {
    let k = tau.arity();
    let k1 = k1_code(k);
    let pinned = ((n_residue as i64 - tau.block_count() as i64).rem_euclid(q as i64)) as u32;
    let mut classes: HashMap<CanonicalCode, usize> = HashMap::new();
    let mut rules = Vec::with_capacity(patterns.len());
    for p in patterns {
        if p.code == k1 {
            rules.push(Coord::Fixed(pinned));
            continue;
        }
        let quot = p.graph.quotient(tau.partition());
        let qcode = canonical_form(&quot)?;
        let aut = count_aut(&quot);
        if aut.is_multiple_of(q as u128) {
            rules.push(Coord::Fixed(0));
        } else {
            let next = classes.len();
            let id = *classes.entry(qcode).or_insert(next);
            rules.push(Coord::Free(id));
        }
    }
    Ok((rules, classes.len()))
}

/// FFreq_n(τ, k, a): the feasible vectors for root type `tau` and vertex
/// count residue `n_residue`, enumerated lazily.
#[derive(Clone, Debug)]
pub struct FeasibleSet {
    pub tau: TypeTau,
    pub arity: usize,
    pub size_bound: usize,
    pub q: u32,
    pub n_residue: u32,
    patterns: Arc<Vec<Pattern>>,
    rules: Vec<Coord>,
    free: usize,
}

pub fn enumerate_feasible(tau: &TypeTau, arity: usize, a: usize, q: u32, n_residue: u32) -> Result<FeasibleSet> {
    require_prime(q)?;
    if tau.arity() != arity {
        return Err(Error::InvalidArgument(format!("type arity {} differs from {arity}", tau.arity())));
    }
    let patterns = enumerate_label_connected(arity, a)?;
    let (rules, free) = classify(&patterns, tau, q, n_residue % q)?;
    Ok(FeasibleSet { tau: tau.clone(), arity, size_bound: a, q, n_residue: n_residue % q, patterns, rules, free })
}

impl FeasibleSet {
    pub fn free_count(&self) -> usize {
        self.free
    }

    /// q^(free classes).
    pub fn size(&self) -> u128 {
        (self.q as u128).checked_pow(self.free as u32).unwrap_or(u128::MAX)
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn rules(&self) -> &[Coord] {
        &self.rules
    }

    pub fn vector(&self, free_values: &[u32]) -> FreqVector {
        let coords = self.patterns.iter().zip(&self.rules).map(|(p, rule)| {
            let r = match *rule {
                Coord::Fixed(r) => r,
                Coord::Free(i) => free_values[i],
            };
            (p.code.clone(), r)
        });
        FreqVector::from_coords(self.q, self.arity, self.size_bound, coords)
    }

    /// All members, in lexicographic order of the free values (first class
    /// varies fastest). Refuses sets larger than one million.
    pub fn members(&self) -> Result<impl Iterator<Item = FreqVector> + '_> {
        let size = self.size();
        if size > FEASIBLE_ENUMERATION_CAP {
            return Err(Error::ScaleExceeded(format!(
                "feasible set has {size} members, above the enumeration cap of {FEASIBLE_ENUMERATION_CAP}"
            )));
        }
        Ok((0..size as usize).map(move |idx| self.vector(&crate::modular::digits(idx, self.q, self.free))))
    }

    pub fn contains(&self, f: &FreqVector) -> bool {
        if f.q() != self.q || f.arity() != self.arity || f.len() != self.patterns.len() {
            return false;
        }
        let mut class_val: Vec<Option<u32>> = vec![None; self.free];
        for (p, rule) in self.patterns.iter().zip(&self.rules) {
            let Some(r) = f.get(&p.code) else { return false };
            match *rule {
                Coord::Fixed(x) => {
                    if r != x {
                        return false;
                    }
                }
                Coord::Free(i) => match class_val[i] {
                    Some(x) if x != r => return false,
                    _ => class_val[i] = Some(r),
                },
            }
        }
        true
    }
}
