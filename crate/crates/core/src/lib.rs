// SPDX-License-Identifier: Apache-2.0

pub mod bracket;
pub mod cli;
pub mod combinat;
pub mod connections;
pub mod diffpoly;
pub mod document;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod jacobi;
pub mod lowdegree;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod suite;
pub mod tensor;

pub use bracket::{CoordinateMap, HomogeneousBracket, NamedCoefficients};
pub use connections::{CMatrix, Connection, CurvatureTensor};
pub use diffpoly::{DiffPoly, Grading, JetVar, Term, ThetaVar};
pub use error::{Error, Result};
pub use report::{Check, Report, Status};
pub use scalar::Scalar;
pub use tensor::{Matrix, Tensor3};
