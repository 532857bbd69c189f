//! Evaluation of basic SPARQL CONSTRUCT and SELECT queries by algebraic
//! graph transformation.
//!
//! Data graphs and query graphs are finite sets of triples over a tagged
//! attribute alphabet (IRIs, literals, blanks, variables). A CONSTRUCT
//! query `(L, R)` becomes a rewrite rule `L -> K <- R` with `K = L ∪ R`;
//! one rewrite step is a pushout (instantiate variables, create fresh
//! blanks) followed by an image factorization (keep only the image of
//! `R`). SELECT queries are encoded as CONSTRUCT queries producing a
//! relational data graph from which the answer table is extracted.
//!
//! The [`oracle`] module carries independent direct-definition evaluators
//! used for differential testing of the engine.

pub mod colimit;
pub mod fixed;
pub mod fresh;
pub mod graph;
pub mod iso;
pub mod matcher;
pub mod morphism;
pub mod oracle;
pub mod poim;
pub mod select;
pub mod syntax;
pub mod term;

pub use fixed::FixedSet;
pub use fresh::FreshSupply;
pub use graph::{Graph, Triple};
pub use morphism::Morphism;
pub use poim::{Calculus, ConstructRule};
pub use select::{Multirelation, SelectQuery};
pub use term::{Term, TermKind};
