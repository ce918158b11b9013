use rayon::prelude::*;

use super::gowers::{phase_sum, residue_counts, Estimate, Mode};
use super::poly::ZqPolynomial;
use crate::error::{Error, Result};

pub const BIAS_EXACT_MAX_VARS: usize = 24;

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    Ok(())
}

/// |Σ_x Pr_p(x) ω^{Q(x)}| over x ∈ {0,1}^m with independent p-biased bits.
pub fn bias_exact(poly: &ZqPolynomial, p: f64) -> Result<f64> {
    check_p(p)?;
    let m = poly.var_count();
    if m > BIAS_EXACT_MAX_VARS {
        return Err(Error::ScaleExceeded(format!(
            "{m} variables exceed exact enumeration ({BIAS_EXACT_MAX_VARS}); use bias_mc"
        )));
    }
    let q = poly.q() as usize;
    let terms = poly.mask_terms();
    // weight of a point depends only on its popcount
    let weight: Vec<f64> = (0..=m).map(|w| p.powi(w as i32) * (1.0 - p).powi((m - w) as i32)).collect();
    const CHUNK: u64 = 1 << 14;
    let total = 1u64 << m;
    let chunks = total.div_ceil(CHUNK);
    let weights = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0f64; q];
            for x in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mut r = 0usize;
                for &(mask, coef) in &terms {
                    if x & mask == mask {
                        r += coef as usize;
                    }
                }
                acc[r % q] += weight[x.count_ones() as usize];
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![0.0f64; q], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    Ok(phase_sum(&weights).norm())
}

/// Monte Carlo estimate of the bias with standard error 1/√samples.
pub fn bias_mc(poly: &ZqPolynomial, p: f64, samples: u64, seed: u64) -> Result<Estimate> {
    check_p(p)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least one sample".into()));
    }
    use rand::Rng as _;
    let m = poly.var_count();
    let counts = residue_counts(poly.q(), samples, seed, |rng| {
        let x: Vec<u32> = (0..m).map(|_| u32::from(rng.gen::<f64>() < p)).collect();
        poly.eval(&x)
    });
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    Ok(Estimate { value: phase_sum(&weights).norm(), mode: Mode::Mc, stderr: Some(1.0 / (samples as f64).sqrt()) })
}
