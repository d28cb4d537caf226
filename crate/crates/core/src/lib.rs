//! Exact computations with weighted Rota-Baxter operators between Leibniz
//! algebras and their representations.

pub mod bracket;
pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod deform;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod leibniz;
pub mod linalg;
pub mod manifest;
pub mod post;
pub mod rbo;
pub mod report;
pub mod search;
pub mod tensor;
pub mod validation;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::Matrix;
pub use tensor::{Arg, Bilinear, LinearMap, MultiMap};
pub use validation::{ValidationReport, Violation};
