//! Finite combinatorial laboratory for first countable spaces that fail
//! weak collectionwise Hausdorffness.
//!
//! - [`ordinal`], [`ladder`]: ordinals below epsilon_0 and ladder systems.
//! - [`walk`]: C-sequences, minimal walks and `rho2`.
//! - [`family`], [`bound`]: integer-valued families, the walk-based
//!   labeling and weak bounds for the ladder-disagreement family.
//! - [`cdw`]: closed-downward sets and families `H_ab`.
//! - [`separation`]: separation oracle, solver and optimization variants.
//! - [`space`]: the space built from `H` and its fan-square view.
//! - [`random`]: seeded instance generators.

pub mod bound;
pub mod cdw;
pub mod error;
pub mod family;
pub mod ladder;
pub mod ordinal;
pub mod random;
pub mod separation;
pub mod space;
pub mod walk;

pub use error::{Error, OrdinalError, Result};
pub use ordinal::Ordinal;
