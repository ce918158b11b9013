//! Polynomials over Z_q, biases under p-biased product measures, and
//! μ-Gowers norms.

mod bias;
mod gowers;
mod measure;
mod poly;

pub use bias::{bias_exact, bias_mc, BIAS_EXACT_MAX_VARS};
pub use gowers::{bias_under, gowers_norm, omega, Estimate, Mode, PhaseFunction};
pub use measure::{mu_power, Measure, PowerMeasure, EXACT_TABLE_CAP};
pub use poly::{gip, ZqPolynomial};
