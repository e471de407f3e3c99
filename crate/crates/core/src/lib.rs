//! Exact computation of δ-derivations, local δ-derivations and 2-local
//! δ-derivations of finite-dimensional Lie algebras given by structure
//! constants.

pub mod catalog;
pub mod dersolve;
pub mod error;
pub mod exactlin;
pub mod forms;
pub mod liealg;
pub mod locder;
pub mod twolocal;

pub use catalog::{build, list_families, Family, FamilySpec};
pub use error::{Error, Result};
pub use exactlin::{q, qi, Mat, Rational, Subspace};
pub use liealg::{JacobiViolation, LieAlgebra};
