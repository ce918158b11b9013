//! Quantifier elimination for FO[Mod_q]: formulas become functions ψ of the
//! root type and a frequency vector, and sentences get exact limit
//! probabilities along each residue class of n mod q.

mod edgepoly;
mod limit;
mod psi;

pub use edgepoly::{formula_to_polynomial, EdgePolynomial, DEFAULT_TERM_CAP};
pub use limit::{limit_of, limit_probabilities, LimitProfile, QAdic};
pub use psi::{build_psi, build_psi_open, PsiFunction, DEFAULT_C_CAP};
