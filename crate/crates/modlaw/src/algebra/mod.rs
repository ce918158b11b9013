//! Frequency arithmetic: gluing products, δ polynomials, the extension
//! relation between root tuples and the λ extension count.

mod delta;
mod extend;
mod glue;
mod lambda;
mod poly;

pub use delta::{delta_polynomial, delta_polynomial_with, SplitStrategy};
pub(crate) use extend::c_u;
pub use extend::{complete_extension, extends, merged_coordinate};
pub use glue::{glue, partial_matchings, product_expand, FormalSum, PartialMatching};
pub use lambda::{extension_sum, lambda_count, lambda_polynomial, LambdaOptions};
pub use poly::{describe_code, FreqPolynomial, Monomial};
