//! eurlab: entropic uncertainty relation (EUR) bounds and EUR-based
//! entanglement criteria for small multipartite quantum systems.
//!
//! The crate computes Born-rule outcome distributions and joint Shannon
//! entropies for product observables, evaluates lower bounds on entropy sums
//! (Maassen–Uffink, pairwise composition, known tight values for qubits and
//! qutrits, Ballester–Wehner), and turns those bounds into separability,
//! genuine-multipartite-entanglement, and steering tests for bipartite and
//! three-party states. A numerical minimizer certifies bound tightness, and
//! the `cli` module drives parameter scans that are written out as CSV.

mod error;

pub mod bounds;
pub mod cli;
pub mod criteria;
pub mod entropy;
pub mod linalg;
pub mod observables;
pub mod states;

pub use error::{Error, Result};
