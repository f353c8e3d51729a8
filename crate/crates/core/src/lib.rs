//! Conditional preference networks (CP-nets), strategic games with
//! parametrized preferences, and the translations between them.
//!
//! A CP-net assigns each variable a table of strict orders over its domain,
//! one per assignment to its parents. An outcome is optimal when no chain of
//! single-variable worsening flips leads to it from another outcome. The
//! optimal outcomes of a net are exactly the pure Nash equilibria of the
//! game whose players are the variables ([`game::cpnet_to_game`]).
//!
//! ```
//! use cpnet::model::NetBuilder;
//! use cpnet::semantics::optimal_outcomes;
//!
//! let net = NetBuilder::new()
//!     .variable("A", &["a", "abar"])
//!     .variable("B", &["b", "bbar"])
//!     .parents("B", &["A"])
//!     .row("A", &[], &["a", "abar"])
//!     .row("B", &["a"], &["b", "bbar"])
//!     .row("B", &["abar"], &["bbar", "b"])
//!     .build()
//!     .unwrap();
//! let optima = optimal_outcomes(&net).unwrap();
//! assert_eq!(optima.len(), 1);
//! assert_eq!(net.outcome_names(&optima[0]), ["a", "b"]);
//! ```

pub mod elimination;
pub mod error;
pub mod game;
pub mod gen;
pub mod io;
pub mod model;
pub mod radix;
pub mod reduction;
pub mod semantics;

#[cfg(test)]
mod testnets;

pub use error::{Error, Result};
