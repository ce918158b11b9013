//! Subgraph frequencies mod q on random graphs.
//!
//! The crate is layered bottom-up: [`graph`] and [`pattern`] hold host graphs
//! and labelled patterns, [`canon`] and [`enumerate`] give isomorphism classes,
//! [`count`] and [`freq`] count injective homomorphisms and their residues,
//! [`algebra`] implements gluing products, δ polynomials and the extension
//! calculus, [`logic`] and [`elimination`] turn FO[Mod_q] sentences into
//! functions of (type, frequency vector) and compute limit probabilities,
//! [`polybias`] covers biases and μ-Gowers norms, and [`experiments`] runs the
//! Monte Carlo checks behind the CLI.

pub mod algebra;
pub mod canon;
pub mod count;
pub mod elimination;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod freq;
pub mod graph;
pub mod logic;
pub mod modular;
pub mod pattern;
pub mod polybias;
pub mod rng;
pub mod types;

pub use canon::{canonical_form, CanonicalCode};
pub use error::{Error, Result};
pub use freq::{FeasibleSet, FreqVector};
pub use graph::Graph;
pub use pattern::LabelledGraph;
pub use types::{PartitionPi, TypeTau};
