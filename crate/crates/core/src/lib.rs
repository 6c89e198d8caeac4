//! Computational toolkit for right-angled Artin groups `A_Γ`, their
//! Bestvina-Brady subgroups, and the graph manifolds built from trees.

pub mod ball;
pub mod bb;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod manifold;
pub mod oracle;
pub mod par;
pub mod search;
pub mod selftest;
pub mod word;

pub use error::{Error, Result};
pub use graph::{load_graph, JoinDecomposition, SimplicialGraph, VertexId};
pub use search::{Measure, Status, Value};
pub use word::{Letter, NormalForm, SWord};
