use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Largest table (in entries) built in exact mode.
pub const EXACT_TABLE_CAP: usize = 1 << 24;

/// Z_q^m points are indexed by `Σ x_i q^i`.
pub(crate) fn point_index(x: &[u32], q: u32) -> usize {
    x.iter().rev().fold(0usize, |acc, &v| acc * q as usize + v as usize)
}

pub(crate) fn point(index: usize, q: u32, m: usize) -> Vec<u32> {
    crate::modular::digits(index, q, m)
}

/// Digit-wise sum in Z_q^m on indices.
pub(crate) fn add_points(a: usize, b: usize, q: u32, m: usize) -> usize {
    let qs = q as usize;
    let (mut a, mut b, mut out, mut scale) = (a, b, 0usize, 1usize);
    for _ in 0..m {
        out += (a % qs + b % qs) % qs * scale;
        a /= qs;
        b /= qs;
        scale *= qs;
    }
    out
}

pub(crate) fn checked_size(q: u32, m: usize) -> Option<usize> {
    (q as usize).checked_pow(m as u32).filter(|&s| s <= EXACT_TABLE_CAP)
}

fn sample_index(probs: &[f64], rng: &mut Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left a sliver: take the last point with mass
    probs.iter().rposition(|&p| p > 0.0).expect("a distribution has mass somewhere")
}

/// A probability distribution on Z_q^m: an explicit table or a product of
/// per-coordinate distributions.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    Table { q: u32, m: usize, probs: Vec<f64> },
    Product { q: u32, factors: Vec<Vec<f64>> },
}

fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p) || p.is_nan()) {
        return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
    }
    Ok(())
}

impl Measure {
    pub fn table(q: u32, m: usize, probs: Vec<f64>) -> Result<Measure> {
        if Some(probs.len()) != (q as usize).checked_pow(m as u32) {
            return Err(Error::InvalidArgument(format!("a table on Z_{q}^{m} needs {q}^{m} entries")));
        }
        check_distribution(&probs)?;
        Ok(Measure::Table { q, m, probs })
    }

    pub fn product(q: u32, factors: Vec<Vec<f64>>) -> Result<Measure> {
        for f in &factors {
            if f.len() != q as usize {
                return Err(Error::InvalidArgument(format!("each factor needs {q} entries")));
            }
            check_distribution(f)?;
        }
        Ok(Measure::Product { q, factors })
    }

    /// Independent bits, each 1 with probability p, embedded in Z_q^m.
    pub fn p_biased(q: u32, m: usize, p: f64) -> Result<Measure> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p.to_string()));
        }
        let mut f = vec![0.0; q as usize];
        f[0] = 1.0 - p;
        f[1] = p;
        Measure::product(q, vec![f; m])
    }

    pub fn uniform(q: u32, m: usize) -> Measure {
        Measure::Product { q, factors: vec![vec![1.0 / q as f64; q as usize]; m] }
    }

    pub fn q(&self) -> u32 {
        match self {
            Measure::Table { q, .. } | Measure::Product { q, .. } => *q,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Measure::Table { m, .. } => *m,
            Measure::Product { factors, .. } => factors.len(),
        }
    }

    pub fn prob(&self, x: &[u32]) -> f64 {
        match self {
            Measure::Table { q, probs, .. } => probs[point_index(x, *q)],
            Measure::Product { factors, .. } => factors.iter().zip(x).map(|(f, &v)| f[v as usize]).product(),
        }
    }

    /// The explicit table, if q^m fits the exact-mode cap.
    pub fn to_table(&self) -> Result<Vec<f64>> {
        match self {
            Measure::Table { probs, .. } => Ok(probs.clone()),
            Measure::Product { q, factors } => {
                let size = checked_size(*q, factors.len()).ok_or_else(|| {
                    Error::ScaleExceeded(format!("Z_{q}^{} is too large for an explicit table", factors.len()))
                })?;
                Ok((0..size).map(|i| self.prob(&point(i, *q, factors.len()))).collect())
            }
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<u32> {
        match self {
            Measure::Table { q, m, probs } => point(sample_index(probs, rng), *q, *m),
            Measure::Product { factors, .. } => factors.iter().map(|f| sample_index(f, rng) as u32).collect(),
        }
    }

    /// μ₁ ⊗ μ₂ on Z_q^{m₁+m₂}, coordinates of μ₁ first.
    pub fn tensor(&self, other: &Measure) -> Result<Measure> {
        if self.q() != other.q() {
            return Err(Error::InvalidArgument("tensor factors must share the modulus".into()));
        }
        let q = self.q();
        if let (Measure::Product { factors: a, .. }, Measure::Product { factors: b, .. }) = (self, other) {
            return Ok(Measure::Product { q, factors: a.iter().chain(b).cloned().collect() });
        }
        let (ta, tb) = (self.to_table()?, other.to_table()?);
        if ta.len().checked_mul(tb.len()).is_none_or(|s| s > EXACT_TABLE_CAP) {
            return Err(Error::ScaleExceeded("tensor product table is too large".into()));
        }
        let probs = tb.iter().flat_map(|&pb| ta.iter().map(move |&pa| pa * pb)).collect();
        Ok(Measure::Table { q, m: self.dim() + other.dim(), probs })
    }
}

/// μ^{(d)} on H^{d+1}, H = Z_q^m, with points ordered (x, t₁, …, t_d).
#[derive(Clone, Debug, PartialEq)]
pub enum PowerMeasure {
    /// Entries indexed by `x + |H|·t₁ + … + |H|^d·t_d`.
    Table { q: u32, m: usize, d: usize, probs: Vec<f64> },
    /// One factor per coordinate of H, each a table on Z_q^{d+1}.
    Product { q: u32, d: usize, factors: Vec<Vec<f64>> },
}

/// μ^{(0)} = μ and μ^{(d)}(x, t, t_d) = μ^{(d−1)}(x, t)·μ^{(d−1)}(x + t_d, t) / Σ_z μ^{(d−1)}(z, t).
/// Prefixes t of zero mass get zero mass, as in the sampler.
fn power_table(base: &[f64], q: u32, m: usize, d: usize) -> Result<Vec<f64>> {
    let h = base.len();
    let total = h.checked_pow(d as u32 + 1).filter(|&s| s <= EXACT_TABLE_CAP);
    if total.is_none() {
        return Err(Error::ScaleExceeded(format!("μ^({d}) on (Z_{q}^{m})^{} is too large to tabulate", d + 1)));
    }
    let mut cur = base.to_vec();
    for level in 1..=d {
        let prefixes = h.pow(level as u32 - 1);
        let mut next = vec![0.0; cur.len() * h];
        for t in 0..prefixes {
            let slice = &cur[t * h..(t + 1) * h];
            let z: f64 = slice.iter().sum();
            if z == 0.0 {
                continue;
            }
            for x in 0..h {
                if slice[x] == 0.0 {
                    continue;
                }
                for td in 0..h {
                    let y = add_points(x, td, q, m);
                    next[(td * prefixes + t) * h + x] = slice[x] * slice[y] / z;
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// μ^{(d)}: an exact table when μ is tabulated (or small enough), otherwise
/// a product of per-coordinate tables, which equals μ^{(d)} for product μ.
pub fn mu_power(mu: &Measure, d: usize) -> Result<PowerMeasure> {
    let q = mu.q();
    let m = mu.dim();
    let exact = matches!(mu, Measure::Table { .. })
        || checked_size(q, m).and_then(|h| h.checked_pow(d as u32 + 1)).is_some_and(|s| s <= EXACT_TABLE_CAP);
    if exact {
        let probs = power_table(&mu.to_table()?, q, m, d)?;
        return Ok(PowerMeasure::Table { q, m, d, probs });
    }
    let Measure::Product { factors, .. } = mu else { unreachable!("tables take the exact branch") };
    let factors = factors.iter().map(|f| power_table(f, q, 1, d)).collect::<Result<Vec<_>>>()?;
    Ok(PowerMeasure::Product { q, d, factors })
}

impl PowerMeasure {
    pub fn q(&self) -> u32 {
        match self {
            PowerMeasure::Table { q, .. } | PowerMeasure::Product { q, .. } => *q,
        }
    }

    pub fn level(&self) -> usize {
        match self {
            PowerMeasure::Table { d, .. } | PowerMeasure::Product { d, .. } => *d,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PowerMeasure::Table { m, .. } => *m,
            PowerMeasure::Product { factors, .. } => factors.len(),
        }
    }

    /// A sample (x, t₁, …, t_d), each a point of Z_q^m.
    pub fn sample(&self, rng: &mut Rng) -> Vec<Vec<u32>> {
        let q = self.q();
        let d = self.level();
        let m = self.dim();
        match self {
            PowerMeasure::Table { probs, .. } => {
                let h = (q as usize).pow(m as u32);
                let mut idx = sample_index(probs, rng);
                (0..=d)
                    .map(|_| {
                        let p = point(idx % h, q, m);
                        idx /= h;
                        p
                    })
                    .collect()
            }
            PowerMeasure::Product { factors, .. } => {
                let mut out = vec![vec![0u32; m]; d + 1];
                for (i, f) in factors.iter().enumerate() {
                    for (j, v) in point(sample_index(f, rng), q, d + 1).into_iter().enumerate() {
                        out[j][i] = v;
                    }
                }
                out
            }
        }
    }
}
