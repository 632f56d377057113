pub mod cospectral;
pub mod eigenstructure;
pub mod error;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod multiplets;
pub mod symmetry;
pub mod transforms;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{AnyGraph, Graph, VertexPair, WeightedIndicatorVector};
pub use linalg::{Field, Matrix, Mode, Rational, Ring, Tolerance};
