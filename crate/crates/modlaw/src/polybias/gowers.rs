use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::{add_points, checked_size, mu_power, point, point_index, Measure, PowerMeasure};
use super::poly::ZqPolynomial;
use crate::error::{Error, Result};
use crate::rng::task_rng;

/// ω = e^{2πi/q}.
pub fn omega(q: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / q as f64)
}

/// Σ_r w_r ω^r.
pub(crate) fn phase_sum(weights: &[f64]) -> Complex64 {
    let q = weights.len() as u32;
    weights.iter().enumerate().map(|(r, &w)| w * omega(q).powu(r as u32)).sum()
}

/// f(x) = ω^{e(x)} on Z_q^m, with e given by a table or a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    q: u32,
    m: usize,
    exponent: Exponent,
}

#[derive(Clone, Debug, PartialEq)]
enum Exponent {
    Table(Vec<u32>),
    Poly(ZqPolynomial),
}

impl PhaseFunction {
    pub fn from_table(q: u32, m: usize, exponents: Vec<u32>) -> Result<Self> {
        if Some(exponents.len()) != (q as usize).checked_pow(m as u32) {
            return Err(Error::InvalidArgument(format!("an exponent table on Z_{q}^{m} needs {q}^{m} entries")));
        }
        let exponents = exponents.into_iter().map(|e| e % q).collect();
        Ok(PhaseFunction { q, m, exponent: Exponent::Table(exponents) })
    }

    /// ω^{Q(x)}.
    pub fn from_poly(poly: &ZqPolynomial) -> Self {
        PhaseFunction { q: poly.q(), m: poly.var_count(), exponent: Exponent::Poly(poly.clone()) }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn exponent_at(&self, x: &[u32]) -> u32 {
        match &self.exponent {
            Exponent::Table(t) => t[point_index(x, self.q)],
            Exponent::Poly(p) => p.eval(x),
        }
    }

    pub fn value(&self, x: &[u32]) -> Complex64 {
        omega(self.q).powu(self.exponent_at(x))
    }

    fn exponent_table(&self) -> Result<Vec<u32>> {
        match &self.exponent {
            Exponent::Table(t) => Ok(t.clone()),
            Exponent::Poly(p) => {
                let size = checked_size(self.q, self.m)
                    .ok_or_else(|| Error::ScaleExceeded(format!("Z_{}^{} is too large to tabulate", self.q, self.m)))?;
                Ok((0..size).map(|i| p.eval(&point(i, self.q, self.m))).collect())
            }
        }
    }

    /// (g₁ ⊗ g₂)(x₁, x₂) = g₁(x₁)·g₂(x₂).
    pub fn tensor(&self, other: &PhaseFunction) -> Result<PhaseFunction> {
        if self.q != other.q {
            return Err(Error::InvalidArgument("tensor factors must share the modulus".into()));
        }
        let (a, b) = (self.exponent_table()?, other.exponent_table()?);
        let q = self.q;
        let table = b.iter().flat_map(|&eb| a.iter().map(move |&ea| (ea + eb) % q)).collect();
        PhaseFunction::from_table(q, self.m + other.m, table)
    }

    /// f·ω^h.
    pub fn times_phase(&self, h: &ZqPolynomial) -> Result<PhaseFunction> {
        if h.q() != self.q || h.var_count() != self.m {
            return Err(Error::InvalidArgument("phase polynomial lives on a different space".into()));
        }
        let q = self.q;
        let table = self.exponent_table()?;
        let out = table.iter().enumerate().map(|(i, &e)| (e + h.eval(&point(i, q, self.m))) % q).collect();
        PhaseFunction::from_table(q, self.m, out)
    }

    /// Exponent of D_t f(x): Σ_S (−1)^{|S|} e(x + Σ_{i∈S} t_i).
    fn derivative_exponent(&self, x: &[u32], t: &[Vec<u32>]) -> u32 {
        let q = self.q;
        let mut total = 0u32;
        let mut y = vec![0u32; self.m];
        for s in 0..1usize << t.len() {
            y.copy_from_slice(x);
            for (i, ti) in t.iter().enumerate() {
                if s >> i & 1 == 1 {
                    for (a, b) in y.iter_mut().zip(ti) {
                        *a = (*a + b) % q;
                    }
                }
            }
            let e = self.exponent_at(&y);
            total = if s.count_ones() % 2 == 0 { (total + e) % q } else { (total + q - e) % q };
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Mc,
}

/// A norm or bias value with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

/// Monte Carlo work is split into this many seeded tasks regardless of the
/// thread count, so results do not depend on scheduling.
pub(crate) const MC_TASKS: u64 = 64;

/// ‖f‖_{U^d,μ} = |E_{(x,t)∼μ^{(d)}} D_t f(x)|^{1/2^d}.
///
/// Exact when q^{m(d+1)} ≤ 2²⁴; otherwise estimated from `samples` draws of
/// the product sampler, with the standard error of |E D_t f| reported.
pub fn gowers_norm(f: &PhaseFunction, mu: &Measure, d: usize, samples: u64, seed: u64) -> Result<Estimate> {
    if f.q() != mu.q() || f.dim() != mu.dim() {
        return Err(Error::InvalidArgument("function and measure live on different spaces".into()));
    }
    let q = f.q();
    let m = f.dim();
    let root = |v: f64| v.powf(1.0 / (1u64 << d) as f64);
    match mu_power(mu, d)? {
        PowerMeasure::Table { probs, .. } => {
            let table = f.exponent_table()?;
            let h = table.len();
            let mut weights = vec![0.0; q as usize];
            for (idx, &p) in probs.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let x = idx % h;
                let ts: Vec<usize> = (1..=d).map(|j| idx / h.pow(j as u32) % h).collect();
                let mut e = 0u32;
                for s in 0..1usize << d {
                    let y = ts
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| s >> i & 1 == 1)
                        .fold(x, |acc, (_, &t)| add_points(acc, t, q, m));
                    e = if s.count_ones() % 2 == 0 { (e + table[y]) % q } else { (e + q - table[y]) % q };
                }
                weights[e as usize] += p;
            }
            Ok(Estimate { value: root(phase_sum(&weights).norm()), mode: Mode::Exact, stderr: None })
        }
        power @ PowerMeasure::Product { .. } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("Monte Carlo needs at least one sample".into()));
            }
            let counts = residue_counts(q, samples, seed, |rng| {
                let s = power.sample(rng);
                f.derivative_exponent(&s[0], &s[1..])
            });
            let weights: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
            Ok(Estimate {
                value: root(phase_sum(&weights).norm()),
                mode: Mode::Mc,
                stderr: Some(1.0 / (samples as f64).sqrt()),
            })
        }
    }
}

/// Tallies `draw` residues over `samples` draws split across fixed tasks.
pub(crate) fn residue_counts(
    q: u32,
    samples: u64,
    seed: u64,
    draw: impl Fn(&mut crate::rng::Rng) -> u32 + Sync,
) -> Vec<u64> {
    let per = samples / MC_TASKS;
    let extra = samples % MC_TASKS;
    (0..MC_TASKS)
        .into_par_iter()
        .map(|task| {
            let n = per + u64::from(task < extra);
            let mut rng = task_rng(seed, task);
            let mut counts = vec![0u64; q as usize];
            for _ in 0..n {
                counts[draw(&mut rng) as usize] += 1;
            }
            counts
        })
        .reduce(|| vec![0u64; q as usize], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// |E_μ f|, the d = 0 norm.
pub fn bias_under(f: &PhaseFunction, mu: &Measure) -> Result<f64> {
    Ok(gowers_norm(f, mu, 0, 1, 0)?.value)
}
