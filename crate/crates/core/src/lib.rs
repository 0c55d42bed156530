//! Vieta-Lucas wavelet spectral solvers for singular second-order ODEs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod expr;
pub mod newton;
pub mod opmat;
pub mod problem;
pub mod quadrature;
pub mod schemes;
pub mod vlp;
pub mod wavelet;

pub use error::{Error, Result};

pub use problem::{builtin_problem, resolve_problem, SingularProblem};
pub use schemes::{solve, SchemeConfig, SchemeKind, Solution};
pub use wavelet::{BasisSpec, CoefficientVector, SolutionExpansion};
