//! Small modular-arithmetic helpers shared by the algebra and elimination layers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(q: u32) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(q))
    }
}

pub fn pow_mod(base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    let mut b = base % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `q`.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    assert!(!a.is_multiple_of(q), "zero has no inverse");
    pow_mod(a, q - 2, q)
}

pub fn big_mod(x: &BigInt, q: u32) -> u32 {
    x.mod_floor(&BigInt::from(q)).to_u32().expect("residue fits")
}

pub fn i64_mod(x: i64, q: u32) -> u32 {
    x.rem_euclid(q as i64) as u32
}

/// Inverse of the Vandermonde matrix `V[x][e] = x^e` over `Z_q`, `x, e ∈ 0..q`,
/// with `0^0 = 1`. Row `e` of the result maps a value table to the coefficient
/// of `x^e`.
pub fn inverse_vandermonde(q: u32) -> Vec<Vec<u32>> {
    let n = q as usize;
    let qq = q as u64;
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|x| {
            let mut row: Vec<u64> = (0..n).map(|e| pow_mod(x as u64, e as u64, qq)).collect();
            row.extend((0..n).map(|j| u64::from(j == x)));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0).expect("Vandermonde is invertible");
        m.swap(col, pivot);
        let inv = inv_mod(m[col][col], qq);
        for v in m[col].iter_mut() {
            *v = *v * inv % qq;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v = (*v + qq * qq - factor * p) % qq;
                }
            }
        }
    }
    // m = [I | V^{-1}], with V^{-1}[e][x] on rows indexed by e
    m.into_iter().map(|row| row[n..].iter().map(|&v| v as u32).collect()).collect()
}

/// Interpolates a function `Z_q^m → Z_q` given as a table indexed by
/// `Σ x_i q^i` into coefficients indexed the same way by exponent vectors,
/// each exponent in `0..q`.
pub fn interpolate(q: u32, m: usize, table: &[u32]) -> Vec<u32> {
    let size = (q as usize).pow(m as u32);
    assert_eq!(table.len(), size);
    let inv = inverse_vandermonde(q);
    let mut data: Vec<u32> = table.to_vec();
    let qs = q as usize;
    let mut stride = 1usize;
    let mut fiber = vec![0u32; qs];
    for _ in 0..m {
        for base in 0..size {
            if !(base / stride).is_multiple_of(qs) {
                continue;
            }
            for (x, slot) in fiber.iter_mut().enumerate() {
                *slot = data[base + x * stride];
            }
            for e in 0..qs {
                let mut acc = 0u64;
                for x in 0..qs {
                    acc += inv[e][x] as u64 * fiber[x] as u64;
                }
                data[base + e * stride] = (acc % q as u64) as u32;
            }
        }
        stride *= qs;
    }
    data
}

/// Digits of `index` in base `q`, least significant first.
pub fn digits(mut index: usize, q: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push((index % q as usize) as u32);
        index /= q as usize;
    }
    out
}
