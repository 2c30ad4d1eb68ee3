//! Exact characteristic classes, topological K-theory and Baum–Douglas
//! K-cycles over a catalog of model manifolds.

pub mod bundle;
pub mod charclass;
pub mod dsl;
pub mod error;
pub mod khomology;
pub mod ktheory;
pub mod ring;

pub use error::{Error, Result};
