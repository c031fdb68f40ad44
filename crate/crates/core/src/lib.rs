//! Finite-type knot invariants of order at most six, computed from exact
//! skein polynomials, and chord-diagram algebras over Q and F2.

pub mod braid;
pub mod chordalg;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod skein;
pub mod tables;

pub use braid::BraidWord;
pub use diagram::{DiagramKey, LinkDiagram, Smoothing};
pub use error::*;
pub use invariants::{InvariantVector, PolyDerivedVector};
pub use poly::{LaurentPoly, Vars};
pub use skein::{SkeinConfig, SkeinEngine};
