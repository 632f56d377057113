//! Scalars and dense linear algebra.

pub mod charpoly;
pub mod eigen;
pub mod int;
pub mod matrix;
pub mod nullspace;
pub mod scalar;

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use int::Int;
pub use matrix::Matrix;
pub use scalar::{parse_rational, rational_string, Field, Mode, Rational, Ring, Tolerance};
