use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("differential does not square to zero in degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("expected a degree-0 map, got degree {0}")]
    NonzeroDegree(i64),
    #[error("sequence maps are not composable at position {0}")]
    NotComposable(usize),
    #[error("{0} requires a finite field")]
    InfiniteField(&'static str),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid category data: {0}")]
    Structure(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("category is not dg: {0}")]
    NotDg(String),
    #[error("Maurer-Cartan equation fails: {0}")]
    MaurerCartan(String),
    #[error("morphism is not closed: {0}")]
    NotClosed(String),
    #[error("twisted complex has {0} summands, above the cap of {1}")]
    TooManySummands(usize, usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("incompatible localization data along arrow {0} -> {1}")]
    Incompatible(usize, usize),
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
