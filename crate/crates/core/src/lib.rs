//! Finite A∞- and dg-categories over a field.
//!
//! Everything is exact: scalars live in a prime field or in the rationals,
//! and every complex checks `d ∘ d = 0` when it is built.

pub mod bar;
pub mod category;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod functor;
pub mod hochschild;
pub mod linalg;
pub mod localize;
pub mod scalar;
pub mod sset;
pub mod twisted;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
