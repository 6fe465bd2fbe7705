//! Finite n-graphs, the axioms of n-category structures on them, and exhaustive
//! enumeration of the structures a given n-graph admits.
//!
//! - [`graph`]: carriers, hom-sets, opposites, automorphisms.
//! - [`composition`]: composition tables and axiom checkers.
//! - [`enumeration`]: counting structures up to isomorphism, with a brute-force oracle.
//! - [`morphisms`]: graph morphisms, functors, transformations, modifications.
//! - [`cobordism`]: one-dimensional cobordisms as matchings, and the sets-and-maps 2-graph.
//! - [`io`]: the JSON graph document and the report document.

pub mod cobordism;
pub mod composition;
pub mod enumeration;
pub mod generate;
pub mod graph;
pub mod io;
pub mod morphisms;
pub mod report;

pub use composition::{AxiomFlags, CategoryStructure, CompTable, HCompTable};
pub use graph::{validate_graph, CellId, CellMap, Dim, NGraph, RawGraph, Side};
pub use report::{AxiomReport, AxiomResult, Counterexample, Verdict};
