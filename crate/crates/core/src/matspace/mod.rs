//! Graphs and linear spaces of square matrices.

mod graph;
mod space;

pub use graph::Graph;
pub use space::{Kind, MatrixSpace, QMatrix};
