use thiserror::Error;

use crate::copula::CopulaFamily;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{family} copula does not support dimension {dim} with parameter {param:?}")]
    UnsupportedDimension {
        family: CopulaFamily,
        dim: usize,
        param: Option<f64>,
    },

    #[error("{family} copula parameter {param:?} is out of range: {reason}")]
    InvalidParameter {
        family: CopulaFamily,
        param: Option<f64>,
        reason: &'static str,
    },

    #[error("copula argument {value} at position {index} is not a probability")]
    InvalidArgument { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rectangle lower corner exceeds upper corner at coordinate {0}")]
    InvertedBox(usize),

    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("edge list is empty")]
    EmptyEdgeList,

    #[error("invalid graph parameters: {0}")]
    GraphParams(String),

    #[error("epidemic parameter {name} = {value} must lie in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("cure probability beta must be positive")]
    ZeroCure,

    #[error("state for node {node} left [0, 1]: {value}")]
    StateOutOfRange { node: usize, value: f64 },

    #[error("equilibrium probability of node {node} equals 1; h is undefined")]
    SaturatedNode { node: usize },

    #[error("infection rate gamma must be positive for {0}")]
    ZeroInfectionRate(&'static str),

    #[error("regression: {0}")]
    Regression(String),

    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
