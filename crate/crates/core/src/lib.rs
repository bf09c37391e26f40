//! Exact computer algebra for right Leibniz algebras.
//!
//! Structure-constant algebras over ℚ and GF(p), derivation and biderivation
//! spaces, the free Leibniz algebra and free dialgebra in normal form,
//! HNN-extension presentations with a degree-truncated quotient engine, and
//! systems of equations over an algebra.

pub mod cli;
pub mod derivations;
pub mod dialgebra;
pub mod equations;
pub mod error;
pub mod fdalg;
pub mod free;
pub mod hnn;
pub mod io;
pub mod linalg;
pub mod parse;
pub mod scalar;

pub use error::{Error, Result};
pub use fdalg::{Element, StructureAlgebra};
pub use scalar::{Field, Scalar};
