//! Entanglement measures, convex-roof extensions and monogamy audits for
//! finite-dimensional tripartite quantum states.

pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod quantum;
pub mod roof;
pub mod structure;
pub mod tolerances;

pub use error::{Error, Result};
