// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("substitution produces a zero denominator in {0}")]
    ZeroDenominator(String),

    #[error("{what} index {index} out of range (1..={bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("expected a coordinate function, found jet variables in {0}")]
    NotScalar(String),

    #[error("metric g is degenerate")]
    DegenerateMetric,

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("bracket is not skew-symmetric")]
    NotSkew,

    #[error("bracket does not satisfy the Jacobi identity")]
    NotJacobi,

    #[error("operation requires degree {expected}, bracket has degree {found}")]
    WrongDegree { expected: u32, found: u32 },

    #[error("input is not homogeneous in deg_u")]
    NotHomogeneous,

    #[error("coordinate map is not invertible: {0}")]
    NotInvertible(String),

    #[error("{0}")]
    Precondition(String),

    #[error("{0}")]
    Schema(String),

    /// An input-file problem with its location.
    #[error("{file}{}: {message}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Input {
        file: String,
        line: Option<usize>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
