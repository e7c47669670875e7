//! Exact homomorphism, subgraph and induced-subgraph counting of a fixed small
//! pattern in a degenerate host graph, driven by DAG elimination forests, together
//! with the structural tooling around DAG treedepth and DAG treewidth.

pub mod catalog;
pub mod counting;
pub mod dag;
pub mod decomposition;
pub mod elimination;
pub mod error;
pub mod graph;
pub mod hom;
pub mod host;
pub mod iso;
pub mod limits;
pub mod oracle;
pub mod scaling;

pub use error::{Error, Result};
pub use graph::{degeneracy_order, DegeneracyOrder, Graph};
