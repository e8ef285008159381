//! Exact operator-valued free probability on the generator algebras of
//! finite directed graphs.
//!
//! The crate builds the creation/annihilation algebra of a graph's free
//! semigroupoid, evaluates the conditional expectation onto the diagonal
//! subalgebra spanned by the vertex projections, and computes
//! operator-valued moments and free cumulants over noncrossing partitions.
//! On top of that engine sit classifiers for freeness, semicircularity,
//! evenness and R-diagonality, and a truncated Fock-space model used as an
//! independent oracle.

pub mod algebra;
pub mod classify;
pub mod cumulant;
pub mod error;
pub mod fock;
pub mod graph;
pub mod lattice;
pub mod ncpartition;
pub mod scalar;

pub use algebra::{
    Algebra, Element, Letter, Monomial, ReducedMonomial, SemanticsMode, SupportDecomposition,
};
pub use cumulant::{ConnectedSet, MomentFunctional};
pub use error::{Error, Result};
pub use graph::{diagram_distinct, EdgeId, Graph, Path, VertexId};
pub use ncpartition::NoncrossingPartition;
pub use scalar::Scalar;
