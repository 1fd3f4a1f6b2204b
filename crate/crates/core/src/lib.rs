//! Exact-arithmetic checks for resolution graphs of blow-ups, multiplicity
//! bounds, small linear programs, intersection lattices of surface
//! singularities and perfect-square polynomial certificates.

pub mod compose;
pub mod error;
pub mod exact;
pub mod format;
pub mod graph;
pub mod lattice;
pub mod multiplicity;
pub mod oracle;
pub mod polytope;
pub mod report;
pub mod square;
pub mod suite;

pub use error::{Error, Result};
pub use exact::{RatMatrix, RatVector, Rational, SymmetricForm};
pub use graph::BlowupGraph;
pub use multiplicity::{ValuationData, WeightFunction};
pub use polytope::{LPResult, LinearSystem};
