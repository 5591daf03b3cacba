//! Finite-space tools for reasoning about compositional generalization:
//! families of cell distributions generated by bijections from a base cell,
//! exhaustive no-free-lunch checks, information-theoretic gap bounds, and a
//! solver for invariant-rule tasks.

pub mod bounds;
pub mod cli;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod irm_solver;
pub mod learners;
pub mod nfl;
pub mod prob;
pub mod rng;
pub mod rules;
pub mod taskfile;

pub use error::{Error, Result};
