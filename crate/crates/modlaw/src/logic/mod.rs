//! FO[Mod_q] formulas over the graph vocabulary {E, =}.
//!
//! Concrete syntax (whitespace-insensitive):
//!
//! ```text
//! formula := "E(" var "," var ")" | var "=" var | "!" formula
//!          | "(" formula "&" formula ")" | "(" formula "|" formula ")"
//!          | "exists" var "." formula | "forall" var "." formula
//!          | "parity" var "." formula | "mod[" int "," int "]" var "." formula
//! var     := [a-z][a-z0-9]*
//! ```
//!
//! `parity` abbreviates `mod[2,1]`; the keywords cannot be used as variables.

mod ast;
mod eval;
mod parse;

pub use ast::{quantifier_depth, Formula};
pub use eval::{evaluate, CompiledFormula};
pub use parse::parse;
