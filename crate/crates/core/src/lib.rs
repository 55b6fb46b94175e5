//! Exact computations with finite-dimensional algebras over the rationals:
//! modules, homological invariants, tilting modules and the transport of
//! perpendicular categories along tilting modules.

pub mod algebra;
pub mod error;
pub mod json;
pub mod lab;
pub mod linalg;
pub mod module;
pub mod tilting;
pub mod transport;

pub use error::{Error, Result};
pub use linalg::{Mat, Scalar};
